"""(rho, theta) Hough transform and its orientation-energy signature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .image import BinaryImage

DEFAULT_THETA_BINS = 180


@dataclass(frozen=True)
class HoughAccumulator:
    """Vote table: counts[j][r] for theta_j = j*pi/B, rho bins 1px wide
    spanning [-rho_max, +rho_max]."""

    counts: np.ndarray
    rho_max: int

    @property
    def theta_bins(self) -> int:
        return self.counts.shape[0]

    @property
    def rho_bins(self) -> int:
        return self.counts.shape[1]


@dataclass(frozen=True)
class DirectionDensity:
    """Collinearity energy per orientation: sum of squared rho-counts."""

    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def hough_transform(b: BinaryImage, theta_bins: int = DEFAULT_THETA_BINS) -> HoughAccumulator:
    """Vote every foreground pixel into every theta column.

    rho = x*cos(theta) + y*sin(theta) with the origin at the top-left
    pixel, x rightward, y downward; theta_j = j*pi/theta_bins.
    """
    if theta_bins < 2:
        raise ValueError("theta_bins must be >= 2")
    rho_max = math.ceil(math.hypot(b.width, b.height))
    thetas = np.arange(theta_bins, dtype=np.float64) * (math.pi / theta_bins)
    counts = kernels.hough_votes(b.pixels, np.cos(thetas), np.sin(thetas), rho_max)
    return HoughAccumulator(counts=counts, rho_max=rho_max)


def direction_density(acc: HoughAccumulator) -> DirectionDensity:
    """Per-theta sum of squared cell counts, exact in integer arithmetic."""
    energy = (acc.counts.astype(np.int64) ** 2).sum(axis=1)
    return DirectionDensity(energy.astype(np.float64))


def density_csv(dd: DirectionDensity) -> str:
    """One 'theta_degrees,value' line per bin."""
    n = len(dd)
    lines = [f"{180.0 * j / n:g},{dd.values[j]:g}" for j in range(n)]
    return "\n".join(lines) + "\n"
