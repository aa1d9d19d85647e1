"""End-to-end orchestration: dual-view preprocessing -> Hough -> features
-> MLP decision, plus streaming, corpus evaluation, and latency benchmarks."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .features import combine, extract_features
from .hough import DEFAULT_THETA_BINS, direction_density, hough_transform
from .image import FramePair
from .mlp import MlpModel, forward
from .preproc import PreprocConfig, preprocess


@dataclass(frozen=True)
class PipelineConfig:
    preproc: PreprocConfig = field(default_factory=PreprocConfig)
    theta_bins: int = DEFAULT_THETA_BINS
    decision_threshold: float = 0.5

    def __post_init__(self):
        if not 0 < self.decision_threshold < 1:
            raise ValueError("decision_threshold must be strictly inside (0, 1)")


@dataclass(frozen=True)
class Decision:
    sequence_id: int
    probability: float
    is_defect: bool  # probability >= threshold (ties fail safe to defect)
    features: np.ndarray
    latency_micros: int

    def to_json(self) -> str:
        return json.dumps({
            "seq": self.sequence_id,
            "p": self.probability,
            "defect": self.is_defect,
            "latency_us": self.latency_micros,
        })


@dataclass(frozen=True)
class StopEvent:
    sequence_id: int

    def to_json(self) -> str:
        return json.dumps({"stop_at": self.sequence_id})


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    true_negatives: int
    false_negatives: int
    detection_rate: float
    false_alarm_rate: float
    latency_mean_us: float
    latency_p95_us: float
    latency_max_us: float

    def to_dict(self) -> dict:
        return {
            "true_positives": self.true_positives,
            "false_positives": self.false_positives,
            "true_negatives": self.true_negatives,
            "false_negatives": self.false_negatives,
            "detection_rate": self.detection_rate,
            "false_alarm_rate": self.false_alarm_rate,
            "latency_mean_us": self.latency_mean_us,
            "latency_p95_us": self.latency_p95_us,
            "latency_max_us": self.latency_max_us,
        }


def view_signature(img, cfg: PipelineConfig):
    """One camera view reduced to its direction-density signature."""
    skeleton = preprocess(img, cfg.preproc)
    return direction_density(hough_transform(skeleton, cfg.theta_bins))


def detect(pair: FramePair, model: MlpModel, cfg: PipelineConfig,
           sequence_id: int = 0) -> Decision:
    """Full chain on both views; wall-clock latency covers everything."""
    t0 = time.perf_counter()
    feats_a = extract_features(view_signature(pair.a, cfg))
    feats_b = extract_features(view_signature(pair.b, cfg))
    fv = combine(feats_a, feats_b)
    p = forward(model, fv)
    latency = int((time.perf_counter() - t0) * 1e6)
    return Decision(
        sequence_id=sequence_id,
        probability=p,
        is_defect=p >= cfg.decision_threshold,
        features=fv,
        latency_micros=latency,
    )


class StreamError(RuntimeError):
    """A frame pair in the stream could not be processed."""

    def __init__(self, sequence_id: int, cause: Exception):
        super().__init__(f"frame pair {sequence_id}: {cause}")
        self.sequence_id = sequence_id


def run_stream(source, model: MlpModel, cfg: PipelineConfig,
               stop_on_defect: bool = True):
    """Yield a Decision per frame pair, in order.

    On the first defect decision (when stop_on_defect) a StopEvent is
    yielded after that Decision and consumption halts.
    """
    for seq, pair in enumerate(source):
        try:
            decision = detect(pair, model, cfg, sequence_id=seq)
        except Exception as exc:
            raise StreamError(seq, exc) from exc
        yield decision
        if stop_on_defect and decision.is_defect:
            yield StopEvent(seq)
            return


def _latency_stats(latencies):
    lat = np.asarray(latencies, dtype=np.float64)
    return float(lat.mean()), float(np.percentile(lat, 95)), float(lat.max())


def evaluate(corpus, model: MlpModel, cfg: PipelineConfig) -> EvalReport:
    """Confusion counts of detect() over a labeled corpus.

    corpus: iterable of (FramePair, label) or (FramePair, label, ...).
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("empty corpus")
    tp = fp = tn = fn = 0
    latencies = []
    for seq, item in enumerate(corpus):
        pair, label = item[0], item[1]
        decision = detect(pair, model, cfg, sequence_id=seq)
        latencies.append(decision.latency_micros)
        if label == 1:
            if decision.is_defect:
                tp += 1
            else:
                fn += 1
        else:
            if decision.is_defect:
                fp += 1
            else:
                tn += 1
    mean, p95, mx = _latency_stats(latencies)
    return EvalReport(
        true_positives=tp, false_positives=fp,
        true_negatives=tn, false_negatives=fn,
        detection_rate=tp / (tp + fn) if tp + fn else 0.0,
        false_alarm_rate=fp / (fp + tn) if fp + tn else 0.0,
        latency_mean_us=mean, latency_p95_us=p95, latency_max_us=mx,
    )


def benchmark(corpus, model: MlpModel, cfg: PipelineConfig, repetitions: int):
    """Per-pair wall-clock latencies over all repetitions.

    Returns a dict with mean/p95/max microseconds plus the raw sample
    count; pure measurement, no pass/fail judgment.
    """
    if repetitions < 1:
        raise ValueError("at least one repetition required")
    corpus = list(corpus)
    if not corpus:
        raise ValueError("empty corpus")
    latencies = []
    for _ in range(repetitions):
        for seq, item in enumerate(corpus):
            decision = detect(item[0], model, cfg, sequence_id=seq)
            latencies.append(decision.latency_micros)
    mean, p95, mx = _latency_stats(latencies)
    return {
        "samples": len(latencies),
        "latency_mean_us": mean,
        "latency_p95_us": p95,
        "latency_max_us": mx,
    }
