"""Preprocessing chain: Gaussian denoise, Laplacian contours, Otsu binarize,
Zhang-Suen thinning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .image import BinaryImage, GrayImage


@dataclass(frozen=True)
class Kernel:
    """Square convolution kernel with odd size."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("kernel must be square")
        if w.shape[0] % 2 == 0:
            raise ValueError("kernel size must be odd")
        object.__setattr__(self, "weights", np.ascontiguousarray(w))

    @property
    def size(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class PreprocConfig:
    gaussian_sigma: float = 1.0
    gaussian_radius: int = 2
    binarize_method: str = "otsu"  # "otsu" or "fixed"
    fixed_threshold: int = 128
    skip_noise_filter: bool = False

    def __post_init__(self):
        if self.gaussian_sigma <= 0:
            raise ValueError("gaussian_sigma must be positive")
        if self.gaussian_radius < 1:
            raise ValueError("gaussian_radius must be >= 1")
        if self.binarize_method not in ("otsu", "fixed"):
            raise ValueError(f"unknown binarize_method {self.binarize_method!r}")
        if not 0 <= self.fixed_threshold <= 255:
            raise ValueError("fixed_threshold must be in [0, 255]")


def gaussian_kernel(sigma: float, radius: int) -> Kernel:
    """Isotropic Gaussian, normalized to sum exactly 1."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if radius < 1:
        raise ValueError("radius must be >= 1")
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    g1 = np.exp(-(d * d) / (2.0 * sigma * sigma))
    w = np.outer(g1, g1)
    return Kernel(w / w.sum())


def convolve(img: GrayImage, k: Kernel) -> GrayImage:
    """Correlate with edge replication; rounds half-up, clamps to [0, 255]."""
    if img.width < k.size or img.height < k.size:
        raise ValueError(
            f"image {img.width}x{img.height} smaller than kernel size {k.size}")
    return GrayImage(kernels.convolve_u8(img.pixels, k.weights))


def laplacian(img: GrayImage) -> GrayImage:
    """4-neighbor Laplacian magnitude with edge replication."""
    if img.width < 3 or img.height < 3:
        raise ValueError("laplacian needs at least a 3x3 image")
    return GrayImage(kernels.laplacian_u8(img.pixels))


def otsu_threshold(img: GrayImage) -> int | None:
    """Threshold t maximizing between-class variance of (<t, >=t).

    Ties break to the smallest t. Returns None when no split separates two
    nonempty classes (all pixels equal).
    """
    hist = np.bincount(img.pixels.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    cum = np.cumsum(hist)
    cum_i = np.cumsum(hist * np.arange(256))
    best_t = None
    best_var = -1.0
    for t in range(256):
        w0 = cum[t - 1] if t > 0 else 0.0
        w1 = total - w0
        if w0 == 0 or w1 == 0:
            continue
        mu0 = (cum_i[t - 1] if t > 0 else 0.0) / w0
        mu1 = (cum_i[255] - (cum_i[t - 1] if t > 0 else 0.0)) / w1
        var = w0 * w1 * (mu0 - mu1) ** 2
        if var > best_var:
            best_var = var
            best_t = t
    return best_t


def binarize(img: GrayImage, cfg: PreprocConfig) -> BinaryImage:
    """Threshold to {0, 1}; pixel >= threshold is foreground.

    Otsu mode falls back to all-background on a degenerate (single-level)
    histogram.
    """
    if cfg.binarize_method == "fixed":
        t = cfg.fixed_threshold
    else:
        t = otsu_threshold(img)
        if t is None:
            return BinaryImage(np.zeros_like(img.pixels))
    return BinaryImage((img.pixels >= t).astype(np.uint8))


def thin(b: BinaryImage) -> BinaryImage:
    """Zhang-Suen thinning to one-pixel-wide lines.

    Zhang-Suen alone can leave 2x2 foreground blocks when every block pixel
    has two neighbor transitions (diagonal appendages). A cleanup pass
    (kernels.resolve_blocks) deletes one corner per block; thinning then
    resumes until both are stable, so the output is a fixed point with no
    2x2 block.
    """
    px = kernels.zhang_suen(b.pixels)
    while kernels.resolve_blocks(px):
        px = kernels.zhang_suen(px)
    return BinaryImage(px)


def preprocess(img: GrayImage, cfg: PreprocConfig) -> BinaryImage:
    """Full chain: Gaussian (unless skipped) -> Laplacian -> binarize -> thin."""
    stage = img
    if not cfg.skip_noise_filter:
        k = gaussian_kernel(cfg.gaussian_sigma, cfg.gaussian_radius)
        stage = convolve(stage, k)
    edges = laplacian(stage)
    return thin(binarize(edges, cfg))
