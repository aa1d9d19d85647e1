"""Statistical summary of a direction-density signature and the combined
two-view classifier input."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hough import DirectionDensity

# Order of the 12 classifier inputs; recorded in model files.
FEATURE_ORDER = (
    "a.mean,a.min,a.min_pos,a.max,a.max_pos,a.std,"
    "b.mean,b.min,b.min_pos,b.max,b.max_pos,b.std"
)


@dataclass(frozen=True)
class ViewFeatures:
    mean: float
    min_value: float
    min_pos: float  # argmin bin index / (B-1), in [0, 1]
    max_value: float
    max_pos: float
    std_dev: float  # population form, divisor N

    def as_tuple(self) -> tuple:
        return (self.mean, self.min_value, self.min_pos,
                self.max_value, self.max_pos, self.std_dev)


def extract_features(dd: DirectionDensity) -> ViewFeatures:
    """Mean, extrema with normalized positions, population std dev.

    Extremum positions take the smallest attaining index; for a single-bin
    density both positions are 0.
    """
    v = dd.values
    n = v.shape[0]
    if n == 0:
        raise ValueError("empty density vector")
    mean = float(v.mean())
    imin = int(v.argmin())
    imax = int(v.argmax())
    std = float(math.sqrt(((v - mean) ** 2).mean()))
    denom = n - 1 if n > 1 else 1
    return ViewFeatures(
        mean=mean,
        min_value=float(v[imin]),
        min_pos=imin / denom,
        max_value=float(v[imax]),
        max_pos=imax / denom,
        std_dev=std,
    )


def combine(a: ViewFeatures, b: ViewFeatures) -> np.ndarray:
    """12-vector: camera A's six statistics followed by camera B's."""
    return np.array(a.as_tuple() + b.as_tuple(), dtype=np.float64)
