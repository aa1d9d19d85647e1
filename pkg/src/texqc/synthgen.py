"""Seeded synthetic Jacquard-style texture generator.

Renders a two-direction thread grid (dark threads on a light ground) as
seen by two cameras at slightly different angles/brightness, with
parametric defect injection. Stands in for live fabric imagery.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, asdict, replace
from pathlib import Path

import numpy as np

from .image import FramePair, GrayImage, read_pgm, write_pgm

DEFECT_TYPES = ("missing_thread", "broken_line", "blob", "misweave")

_GROUND = 205.0
_THREAD = 150.0
_CROSSING = 130.0  # warp-over-weft crossings read darker (3D relief cue)


@dataclass(frozen=True)
class SynthSpec:
    width: int = 128
    height: int = 128
    warp_period: int = 8    # warp runs much denser: its Hough peak dominates
    weft_period: int = 24   # sparse weft keeps lattice-diagonal aliases weak
    thread_thickness: int = 2
    pattern_angle_a: float = 20.0  # degrees; kept off 0 so the warp peak
    pattern_angle_b: float = 28.0  # never wraps across the theta=0 seam
    brightness_a: float = 1.0
    brightness_b: float = 0.92
    noise_sigma: float = 3.0
    defect: str = "none"
    defect_magnitude: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("dimensions must be positive")
        if self.warp_period < 4 or self.weft_period < 4:
            raise ValueError("thread periods must be >= 4 pixels")
        if self.thread_thickness < 1:
            raise ValueError("thread_thickness must be >= 1")
        if (self.warp_period < 2 * self.thread_thickness
                or self.weft_period < 2 * self.thread_thickness):
            raise ValueError("periods must be >= 2x thread thickness")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.defect != "none" and self.defect not in DEFECT_TYPES:
            raise ValueError(f"unknown defect type {self.defect!r}")
        if not 0 < self.defect_magnitude <= 1:
            raise ValueError("defect_magnitude must be in (0, 1]")

    @property
    def label(self) -> int:
        return 0 if self.defect == "none" else 1


def _fabric_intensity(spec: SynthSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Texture intensity in fabric coordinates, defect included.

    Warp threads run along v (periodic in u); weft threads along u.
    Defects are placed at the fabric point under the frame center so both
    camera views see the same flaw.
    """
    uc = spec.width / 2.0
    vc = spec.height / 2.0
    mag = spec.defect_magnitude

    warp_u = u
    if spec.defect == "misweave":
        # shear a central warp band: its threads bend well off the warp
        # direction, dumping Hough energy into otherwise empty angles
        band = np.abs(u - uc) < mag * 5.0 * spec.warp_period
        warp_u = np.where(band, u + mag * 1.2 * (v - vc), u)

    warp_on = np.mod(warp_u, spec.warp_period) < spec.thread_thickness
    weft_on = np.mod(v, spec.weft_period) < spec.thread_thickness

    if spec.defect in ("missing_thread", "broken_line"):
        target = math.floor(uc / spec.warp_period)
        idx = np.floor(warp_u / spec.warp_period)
        on_thread = (idx == target) | (idx == target + 1)
        if spec.defect == "missing_thread":
            # both threads are gone over the full height at magnitude 1
            gap = np.abs(v - vc) < mag * spec.height
        else:
            gap = np.abs(v - vc) < mag * 3.0 * spec.weft_period
        warp_on = warp_on & ~(on_thread & gap)

    img = np.full(u.shape, _GROUND)
    img[weft_on] = _THREAD
    img[warp_on] = _THREAD
    img[warp_on & weft_on] = _CROSSING

    if spec.defect == "blob":
        radius = mag * min(spec.width, spec.height) / 6.0
        img[(u - uc) ** 2 + (v - vc) ** 2 < radius ** 2] = _THREAD
    return img


def _render_view(spec: SynthSpec, angle_deg: float, brightness: float,
                 rng: np.random.Generator) -> GrayImage:
    y, x = np.mgrid[0:spec.height, 0:spec.width].astype(np.float64)
    phi = math.radians(angle_deg)
    u = x * math.cos(phi) + y * math.sin(phi)
    v = -x * math.sin(phi) + y * math.cos(phi)
    img = _fabric_intensity(spec, u, v) * brightness
    if spec.noise_sigma > 0:
        img = img + rng.normal(0.0, spec.noise_sigma, size=img.shape)
    return GrayImage(np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8))


def generate(spec: SynthSpec):
    """Render one labeled frame pair; deterministic in the spec."""
    rng_a = np.random.default_rng((spec.seed, 0xA))
    rng_b = np.random.default_rng((spec.seed, 0xB))
    pair = FramePair(
        a=_render_view(spec, spec.pattern_angle_a, spec.brightness_a, rng_a),
        b=_render_view(spec, spec.pattern_angle_b, spec.brightness_b, rng_b),
    )
    return pair, spec.label


def make_corpus(base: SynthSpec, n: int, defect_fraction: float, seed: int):
    """n jittered frame pairs; round(n*defect_fraction) carry cycled defects.

    Per-item jitter (periods +/-10%, angles +/-2 degrees) models normal
    process variation so the classifier cannot key on constants. Returns
    a list of (FramePair, label, defect_type, item_spec).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= defect_fraction <= 1:
        raise ValueError("defect_fraction must be in [0, 1]")
    n_defect = round(n * defect_fraction)
    order = np.random.default_rng((seed, 0xD)).permutation(n)
    defective = set(int(i) for i in order[:n_defect])

    items = []
    defect_cursor = 0
    for i in range(n):
        rng = np.random.default_rng((seed, i))
        # one shared period factor: looms stretch warp and weft together
        pj = np.repeat(1.0 + rng.uniform(-0.10, 0.10), 2)
        aj = rng.uniform(-2.0, 2.0, size=2)
        if i in defective:
            defect = DEFECT_TYPES[defect_cursor % len(DEFECT_TYPES)]
            defect_cursor += 1
        else:
            defect = "none"
        spec = replace(
            base,
            warp_period=max(4, round(base.warp_period * pj[0])),
            weft_period=max(4, round(base.weft_period * pj[1])),
            pattern_angle_a=base.pattern_angle_a + aj[0],
            pattern_angle_b=base.pattern_angle_b + aj[1],
            defect=defect,
            seed=int(np.random.default_rng((seed, i, 0xE)).integers(0, 2 ** 63)),
        )
        pair, label = generate(spec)
        items.append((pair, label, defect, spec))
    return items


def write_corpus(items, out_dir, base: SynthSpec, seed: int):
    """Corpus directory: NNNN_a.pgm / NNNN_b.pgm + labels.csv + corpus.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, (pair, label, defect, _spec) in enumerate(items):
        (out / f"{i:04d}_a.pgm").write_bytes(write_pgm(pair.a))
        (out / f"{i:04d}_b.pgm").write_bytes(write_pgm(pair.b))
        rows.append((i, label, defect))
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["index", "label", "defect_type"])
    writer.writerows(rows)
    (out / "labels.csv").write_text(buf.getvalue())
    meta = {"base_spec": asdict(base), "seed": seed, "n": len(items)}
    (out / "corpus.json").write_text(json.dumps(meta, indent=1) + "\n")


def load_corpus(corpus_dir):
    """Read a corpus directory back as a list of (FramePair, label, defect)."""
    root = Path(corpus_dir)
    labels_file = root / "labels.csv"
    if not labels_file.is_file():
        raise FileNotFoundError(f"no labels.csv in {root}")
    items = []
    with labels_file.open(newline="") as fh:
        for row in csv.DictReader(fh):
            i = int(row["index"])
            pair = FramePair(
                a=read_pgm((root / f"{i:04d}_a.pgm").read_bytes()),
                b=read_pgm((root / f"{i:04d}_b.pgm").read_bytes()),
            )
            items.append((pair, int(row["label"]), row["defect_type"]))
    if not items:
        raise ValueError(f"corpus {root} is empty")
    return items
