"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line with the measured value against its pinned budget.

Run with: pytest tests/test_acceptance.py -v -s
"""

import time
from dataclasses import replace

import numpy as np
import pytest

import conftest

from texqc.features import combine, extract_features
from texqc.mlp import LabeledSample, TrainConfig, gradient, train
from texqc.pipeline import PipelineConfig, benchmark, evaluate, view_signature
from texqc.preproc import PreprocConfig
from texqc.synthgen import SynthSpec, make_corpus

from test_mlp import make_batch, make_model, max_relative_error, numeric_gradient
from test_preproc import has_2x2_block


def corpus_features(items, cfg):
    return [LabeledSample(
        combine(extract_features(view_signature(pair.a, cfg)),
                extract_features(view_signature(pair.b, cfg))), label)
        for pair, label, _, _ in items]


def train_and_evaluate(base_spec, cfg):
    training = make_corpus(base_spec, 400, 0.5, seed=1)
    heldout = make_corpus(base_spec, 200, 0.5, seed=2)
    model, _ = train(corpus_features(training, cfg), TrainConfig())
    report = evaluate([(p, l) for p, l, _, _ in heldout], model, cfg)
    return report


@pytest.fixture(scope="module")
def heldout_report():
    start = time.perf_counter()
    report = train_and_evaluate(SynthSpec(), PipelineConfig())
    return report, time.perf_counter() - start


def report_line(name, ok, detail):
    line = f"{name} {'PASS' if ok else 'FAIL'}: {detail}"
    print(f"\n{line}")
    conftest.ACCEPTANCE_LINES.append(line)


def test_ac1_detection_rate(heldout_report):
    report, elapsed = heldout_report
    ok = report.detection_rate >= 0.99 and elapsed < 300
    report_line("AC-1", ok,
                f"detection_rate={report.detection_rate:.4f} (>=0.99), "
                f"runtime={elapsed:.1f}s (<300s)")
    assert report.detection_rate >= 0.99
    assert elapsed < 300


def test_ac2_false_alarms(heldout_report):
    report, _ = heldout_report
    ok = report.false_alarm_rate <= 0.01
    report_line("AC-2", ok,
                f"false_alarm_rate={report.false_alarm_rate:.4f} (<=0.01, target 0)")
    assert report.false_alarm_rate <= 0.01


def test_ac3_noise_filter_ablation():
    noisy = replace(SynthSpec(), noise_sigma=20.0)
    filtered = train_and_evaluate(noisy, PipelineConfig())
    unfiltered = train_and_evaluate(
        noisy, PipelineConfig(preproc=PreprocConfig(skip_noise_filter=True)))
    fa_f, fa_u = filtered.false_alarm_rate, unfiltered.false_alarm_rate
    ok = fa_u >= fa_f and (fa_u > fa_f or (fa_u == 0 and fa_f == 0))
    report_line("AC-3", ok,
                f"false_alarm_rate no-filter={fa_u:.4f} vs filtered={fa_f:.4f}")
    assert fa_u >= fa_f
    assert fa_u > fa_f or (fa_u == 0 and fa_f == 0)


def test_ac4_gradient_correctness():
    worst = 0.0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        model = make_model(rng)
        samples = make_batch(rng)
        worst = max(worst, max_relative_error(gradient(model, samples),
                                              numeric_gradient(model, samples)))
    ok = worst < 1e-4
    report_line("AC-4", ok, f"max relative gradient error={worst:.2e} (<1e-4)")
    assert worst < 1e-4


def test_ac5_latency_512():
    items = make_corpus(SynthSpec(width=512, height=512), 20, 0.0, seed=6)
    corpus_features(items[:2], PipelineConfig())  # warm caches
    model, _ = train(
        corpus_features(make_corpus(SynthSpec(), 8, 0.5, seed=9),
                        PipelineConfig()),
        TrainConfig(epochs=20))
    stats = benchmark([(p, l) for p, l, _, _ in items], model,
                      PipelineConfig(), repetitions=3)
    p95_ms = stats["latency_p95_us"] / 1000.0
    ok = p95_ms < 250.0
    report_line("AC-5", ok, f"p95 latency={p95_ms:.1f}ms (budget 250ms, "
                            f"n={stats['samples']})")
    assert p95_ms < 250.0


def test_ac6_oracle_suites():
    from test_features import reference_stats
    from test_hough import reference_votes
    from test_preproc import reference_convolve, reference_otsu
    from texqc.hough import hough_transform
    from texqc.image import BinaryImage, GrayImage
    from texqc.hough import DirectionDensity
    from texqc.preproc import convolve, gaussian_kernel, otsu_threshold, thin

    rng = np.random.default_rng(123)

    img = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
    k = gaussian_kernel(1.0, 2)
    assert np.array_equal(convolve(GrayImage(img), k).pixels,
                          reference_convolve(img, k.weights))

    for _ in range(10):
        px = rng.integers(0, 256, size=(12, 12), dtype=np.uint8)
        assert otsu_threshold(GrayImage(px)) == reference_otsu(px.astype(float))

    for _ in range(5):
        px = (rng.random((16, 16)) < 0.3).astype(np.uint8)
        acc = hough_transform(BinaryImage(px), theta_bins=45)
        assert np.array_equal(acc.counts, reference_votes(px, 45))

    values = rng.random(180)
    feats = extract_features(DirectionDensity(values))
    for got, want in zip(feats.as_tuple(), reference_stats(list(values))):
        assert got == pytest.approx(want, abs=1e-9)

    for _ in range(100):
        px = (rng.random((20, 20)) < 0.45).astype(np.uint8)
        once = thin(BinaryImage(px))
        assert thin(once) == once
        assert not has_2x2_block(once.pixels)

    report_line("AC-6", True,
                "convolution, Otsu, Hough, feature, and thinning oracles all hold")
