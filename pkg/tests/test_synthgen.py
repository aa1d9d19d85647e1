import csv
import json
from dataclasses import replace

import numpy as np
import pytest

from texqc.features import combine, extract_features
from texqc.pipeline import PipelineConfig, view_signature
from texqc.synthgen import (DEFECT_TYPES, SynthSpec, generate, load_corpus,
                            make_corpus, write_corpus)

SMALL = SynthSpec(width=64, height=64)


class TestGenerate:
    def test_deterministic(self):
        p1, l1 = generate(SMALL)
        p2, l2 = generate(SMALL)
        assert p1.a == p2.a and p1.b == p2.b and l1 == l2

    def test_identical_views_when_symmetric(self):
        spec = replace(SMALL, noise_sigma=0.0, pattern_angle_b=SMALL.pattern_angle_a,
                       brightness_b=SMALL.brightness_a)
        pair, label = generate(spec)
        assert label == 0
        assert pair.a == pair.b

    def test_label_soundness(self):
        assert generate(SMALL)[1] == 0
        for d in DEFECT_TYPES:
            assert generate(replace(SMALL, defect=d))[1] == 1

    def test_missing_thread_removes_dark_pixels(self):
        clean = replace(SMALL, noise_sigma=0.0)
        broken = replace(clean, defect="missing_thread")
        ground = round(205 * clean.brightness_a)
        dark_clean = (generate(clean)[0].a.pixels < ground).sum()
        dark_broken = (generate(broken)[0].a.pixels < ground).sum()
        assert dark_broken < dark_clean

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SynthSpec(warp_period=3)
        with pytest.raises(ValueError):
            SynthSpec(warp_period=5, thread_thickness=3)
        with pytest.raises(ValueError):
            SynthSpec(defect="hole")
        with pytest.raises(ValueError):
            SynthSpec(defect_magnitude=0.0)


class TestMakeCorpus:
    def test_class_balance(self):
        items = make_corpus(SMALL, 10, 0.5, seed=3)
        labels = [label for _, label, _, _ in items]
        assert labels.count(0) == 5 and labels.count(1) == 5

    def test_deterministic(self):
        a = make_corpus(SMALL, 6, 0.5, seed=9)
        b = make_corpus(SMALL, 6, 0.5, seed=9)
        for (pa, la, da, _), (pb, lb, db, _) in zip(a, b):
            assert pa.a == pb.a and pa.b == pb.b and la == lb and da == db

    def test_defect_types_cycled(self):
        items = make_corpus(SMALL, 8, 1.0, seed=0)
        seen = [d for _, _, d, _ in items]
        assert sorted(set(seen)) == sorted(DEFECT_TYPES)

    def test_fraction_bounds(self):
        with pytest.raises(ValueError):
            make_corpus(SMALL, 4, 1.5, seed=0)


class TestCorpusIO:
    def test_round_trip(self, tmp_path):
        items = make_corpus(SMALL, 4, 0.5, seed=5)
        write_corpus(items, tmp_path, SMALL, seed=5)
        loaded = load_corpus(tmp_path)
        assert len(loaded) == 4
        for (pair, label, defect, _), (lpair, llabel, ldefect) in zip(items, loaded):
            assert pair.a == lpair.a and pair.b == lpair.b
            assert label == llabel and defect == ldefect

    def test_layout(self, tmp_path):
        items = make_corpus(SMALL, 2, 0.0, seed=1)
        write_corpus(items, tmp_path, SMALL, seed=1)
        assert (tmp_path / "0000_a.pgm").exists()
        assert (tmp_path / "0001_b.pgm").exists()
        with (tmp_path / "labels.csv").open(newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["label"] == "0" and rows[0]["defect_type"] == "none"
        meta = json.loads((tmp_path / "corpus.json").read_text())
        assert meta["seed"] == 1 and meta["base_spec"]["width"] == 64

    def test_missing_dir(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_corpus(tmp_path / "nope")


def test_defect_visibility_above_clean_spread():
    """Every defect at magnitude 1, noise 0 moves at least one of the 12
    features by more than the clean within-class standard deviation."""
    cfg = PipelineConfig()
    base = SynthSpec(noise_sigma=0.0, defect_magnitude=1.0)

    def fv(spec):
        pair, _ = generate(spec)
        return combine(extract_features(view_signature(pair.a, cfg)),
                       extract_features(view_signature(pair.b, cfg)))

    clean_items = make_corpus(base, 20, 0.0, seed=11)
    clean = np.array([
        combine(extract_features(view_signature(p.a, cfg)),
                extract_features(view_signature(p.b, cfg)))
        for p, _, _, _ in clean_items])
    spread = clean.std(axis=0)
    f_clean = fv(base)
    for defect in DEFECT_TYPES:
        delta = np.abs(fv(replace(base, defect=defect)) - f_clean)
        assert (delta > spread).any(), defect
