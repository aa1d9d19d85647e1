"""NumPy implementations of the hot raster kernels.

Fallback backend used when the compiled extension is unavailable (or when
TEXQC_PURE_PYTHON is set). Must produce bit-identical results to the
compiled backend; the test suite runs every kernel oracle against both.

Rounding is half-up everywhere (floor(x + 0.5)) so the two backends agree
on ties.
"""

from __future__ import annotations

import numpy as np


def _round_half_up(a: np.ndarray) -> np.ndarray:
    return np.floor(a + 0.5)


def convolve_u8(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Correlate a uint8 image with a square kernel.

    Edge replication at the borders; result rounded half-up and clamped
    to [0, 255].
    """
    ks = kernel.shape[0]
    r = ks // 2
    h, w = img.shape
    padded = np.pad(img.astype(np.float64), r, mode="edge")
    acc = np.zeros((h, w), dtype=np.float64)
    for i in range(ks):
        for j in range(ks):
            acc += kernel[i, j] * padded[i:i + h, j:j + w]
    return np.clip(_round_half_up(acc), 0, 255).astype(np.uint8)


def laplacian_u8(img: np.ndarray) -> np.ndarray:
    """4-neighbor Laplacian magnitude: |4c - n - s - e - w|, clamped to 255.

    Borders use edge replication.
    """
    f = np.pad(img.astype(np.int32), 1, mode="edge")
    c = f[1:-1, 1:-1]
    n = f[:-2, 1:-1]
    s = f[2:, 1:-1]
    wst = f[1:-1, :-2]
    e = f[1:-1, 2:]
    lap = np.abs(4 * c - n - s - e - wst)
    return np.minimum(lap, 255).astype(np.uint8)


def _zs_subiteration(img: np.ndarray, step: int) -> np.ndarray:
    """One Zhang-Suen subiteration; returns the deletion mask."""
    f = np.pad(img, 1)
    p2 = f[:-2, 1:-1]   # N
    p3 = f[:-2, 2:]     # NE
    p4 = f[1:-1, 2:]    # E
    p5 = f[2:, 2:]      # SE
    p6 = f[2:, 1:-1]    # S
    p7 = f[2:, :-2]     # SW
    p8 = f[1:-1, :-2]   # W
    p9 = f[:-2, :-2]    # NW
    ring = [p2, p3, p4, p5, p6, p7, p8, p9, p2]
    b = sum(p.astype(np.int32) for p in ring[:8])
    a = sum(((ring[k] == 0) & (ring[k + 1] == 1)).astype(np.int32) for k in range(8))
    if step == 0:
        c1 = p2 * p4 * p6 == 0
        c2 = p4 * p6 * p8 == 0
    else:
        c1 = p2 * p4 * p8 == 0
        c2 = p2 * p6 * p8 == 0
    return (img == 1) & (b >= 2) & (b <= 6) & (a == 1) & c1 & c2


def zhang_suen(img: np.ndarray) -> np.ndarray:
    """Thin to a one-pixel skeleton; stops when a full pass deletes nothing."""
    out = img.copy()
    while True:
        deleted = False
        for step in (0, 1):
            mask = _zs_subiteration(out, step)
            if mask.any():
                out[mask] = 0
                deleted = True
        if not deleted:
            return out


def resolve_blocks(px: np.ndarray) -> bool:
    """Delete one pixel from every remaining 2x2 all-foreground block.

    Blocks are visited in raster order by their top-left corner; the corner
    with the fewest foreground neighbors outside the block (first wins on
    ties, in row-major corner order) is deleted. Mutates px in place and
    returns True if anything was deleted. Deletions cannot create new
    blocks, so one pass leaves no 2x2 block.
    """
    blocks = px[:-1, :-1] & px[:-1, 1:] & px[1:, :-1] & px[1:, 1:]
    ys, xs = np.nonzero(blocks)
    if ys.size == 0:
        return False
    padded = np.pad(px, 1)
    for y, x in zip(ys, xs):
        corners = [(y, x), (y, x + 1), (y + 1, x), (y + 1, x + 1)]
        if not all(px[c] for c in corners):
            continue  # resolved by an earlier deletion
        block = set(corners)
        best = None
        for cy, cx in corners:
            outside = sum(
                padded[cy + 1 + dy, cx + 1 + dx]
                for dy in (-1, 0, 1) for dx in (-1, 0, 1)
                if (dy, dx) != (0, 0) and (cy + dy, cx + dx) not in block)
            if best is None or outside < best[0]:
                best = (outside, cy, cx)
        _, cy, cx = best
        px[cy, cx] = 0
        padded[cy + 1, cx + 1] = 0
    return True


def hough_votes(img: np.ndarray, cos_t: np.ndarray, sin_t: np.ndarray,
                rho_max: int) -> np.ndarray:
    """Accumulate (theta, rho) votes for every foreground pixel.

    Rho bin index is round_half_up(x*cos + y*sin + rho_max); one vote per
    pixel per theta bin.
    """
    n_theta = cos_t.shape[0]
    n_rho = 2 * rho_max + 1
    counts = np.zeros((n_theta, n_rho), dtype=np.int64)
    ys, xs = np.nonzero(img)
    if xs.size == 0:
        return counts
    xs = xs.astype(np.float64)
    ys = ys.astype(np.float64)
    for j in range(n_theta):
        rho = xs * cos_t[j] + ys * sin_t[j]
        idx = _round_half_up(rho + rho_max).astype(np.int64)
        counts[j] = np.bincount(idx, minlength=n_rho)
    return counts
