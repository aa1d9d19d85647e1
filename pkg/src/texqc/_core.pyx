# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled raster kernels: convolution, Laplacian, thinning, Hough voting.

Bit-identical to the pure NumPy backend in _pure.py; rounding is half-up
(floor(x + 0.5)) in both.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def convolve_u8(const cnp.uint8_t[:, ::1] img, const cnp.float64_t[:, ::1] kernel):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t ks = kernel.shape[0], r = ks // 2
    out = np.empty((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] o = out
    cdef Py_ssize_t y, x, i, j, yy, xx
    cdef double acc
    with nogil:
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for i in range(ks):
                    yy = y + i - r
                    if yy < 0:
                        yy = 0
                    elif yy >= h:
                        yy = h - 1
                    for j in range(ks):
                        xx = x + j - r
                        if xx < 0:
                            xx = 0
                        elif xx >= w:
                            xx = w - 1
                        acc += kernel[i, j] * img[yy, xx]
                acc = floor(acc + 0.5)
                if acc < 0.0:
                    acc = 0.0
                elif acc > 255.0:
                    acc = 255.0
                o[y, x] = <cnp.uint8_t>acc
    return out


def laplacian_u8(const cnp.uint8_t[:, ::1] img):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out = np.empty((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] o = out
    cdef Py_ssize_t y, x, yn, ys, xw, xe
    cdef long v
    with nogil:
        for y in range(h):
            yn = y - 1 if y > 0 else 0
            ys = y + 1 if y < h - 1 else h - 1
            for x in range(w):
                xw = x - 1 if x > 0 else 0
                xe = x + 1 if x < w - 1 else w - 1
                v = 4 * <long>img[y, x] - img[yn, x] - img[ys, x] \
                    - img[y, xw] - img[y, xe]
                if v < 0:
                    v = -v
                if v > 255:
                    v = 255
                o[y, x] = <cnp.uint8_t>v
    return out


cdef inline int _neighbors(const cnp.uint8_t[:, ::1] f, Py_ssize_t y, Py_ssize_t x,
                           int* ring) nogil:
    # ring order: N, NE, E, SE, S, SW, W, NW (padded array, so no bounds checks)
    ring[0] = f[y - 1, x]
    ring[1] = f[y - 1, x + 1]
    ring[2] = f[y, x + 1]
    ring[3] = f[y + 1, x + 1]
    ring[4] = f[y + 1, x]
    ring[5] = f[y + 1, x - 1]
    ring[6] = f[y, x - 1]
    ring[7] = f[y - 1, x - 1]
    return 0


def zhang_suen(const cnp.uint8_t[:, ::1] img):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    padded = np.zeros((h + 2, w + 2), dtype=np.uint8)
    padded[1:h + 1, 1:w + 1] = np.asarray(img)
    mask = np.zeros((h + 2, w + 2), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] f = padded
    cdef cnp.uint8_t[:, ::1] m = mask
    cdef Py_ssize_t y, x
    cdef int ring[8]
    cdef int b, a, k, step, any_deleted, pass_deleted, c1, c2
    with nogil:
        pass_deleted = 1
        while pass_deleted:
            pass_deleted = 0
            for step in range(2):
                any_deleted = 0
                for y in range(1, h + 1):
                    for x in range(1, w + 1):
                        if f[y, x] == 0:
                            continue
                        _neighbors(f, y, x, ring)
                        b = 0
                        a = 0
                        for k in range(8):
                            b += ring[k]
                            if ring[k] == 0 and ring[(k + 1) % 8] == 1:
                                a += 1
                        if b < 2 or b > 6 or a != 1:
                            continue
                        if step == 0:
                            c1 = ring[0] * ring[2] * ring[4]
                            c2 = ring[2] * ring[4] * ring[6]
                        else:
                            c1 = ring[0] * ring[2] * ring[6]
                            c2 = ring[0] * ring[4] * ring[6]
                        if c1 == 0 and c2 == 0:
                            m[y, x] = 1
                            any_deleted = 1
                if any_deleted:
                    pass_deleted = 1
                    for y in range(1, h + 1):
                        for x in range(1, w + 1):
                            if m[y, x]:
                                f[y, x] = 0
                                m[y, x] = 0
    return padded[1:h + 1, 1:w + 1].copy()


def resolve_blocks(cnp.uint8_t[:, ::1] px):
    """Delete one corner from every 2x2 all-foreground block, raster order.

    Matches _pure.resolve_blocks: the corner with the fewest foreground
    neighbors outside the block goes, first corner wins ties. Mutates px
    in place; returns True if anything was deleted.
    """
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1]
    cdef Py_ssize_t y, x, i, cy, cx, ny, nx, dy, dx, best_i
    cdef int outside, best_out, changed = 0
    with nogil:
        for y in range(h - 1):
            for x in range(w - 1):
                if not (px[y, x] and px[y, x + 1]
                        and px[y + 1, x] and px[y + 1, x + 1]):
                    continue
                best_i = 0
                best_out = 9
                for i in range(4):
                    cy = y + (i >> 1)
                    cx = x + (i & 1)
                    outside = 0
                    for dy in range(-1, 2):
                        ny = cy + dy
                        if ny < 0 or ny >= h:
                            continue
                        for dx in range(-1, 2):
                            nx = cx + dx
                            if nx < 0 or nx >= w or (dy == 0 and dx == 0):
                                continue
                            if y <= ny <= y + 1 and x <= nx <= x + 1:
                                continue  # inside the block
                            outside += px[ny, nx]
                    if outside < best_out:
                        best_out = outside
                        best_i = i
                px[y + (best_i >> 1), x + (best_i & 1)] = 0
                changed = 1
    return bool(changed)


def hough_votes(const cnp.uint8_t[:, ::1] img, const cnp.float64_t[::1] cos_t,
                const cnp.float64_t[::1] sin_t, Py_ssize_t rho_max):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t n_theta = cos_t.shape[0]
    counts = np.zeros((n_theta, 2 * rho_max + 1), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] c = counts
    # gather foreground coordinates once; then vote theta-outer so each
    # pass writes a single accumulator row (stays in L1)
    xs_arr = np.empty(h * w, dtype=np.float64)
    ys_arr = np.empty(h * w, dtype=np.float64)
    cdef cnp.float64_t[::1] xs = xs_arr
    cdef cnp.float64_t[::1] ys = ys_arr
    cdef Py_ssize_t y, x, j, k, n = 0
    cdef double cj, sj
    with nogil:
        for y in range(h):
            for x in range(w):
                if img[y, x]:
                    xs[n] = x
                    ys[n] = y
                    n += 1
        for j in range(n_theta):
            cj = cos_t[j]
            sj = sin_t[j]
            for k in range(n):
                c[j, <Py_ssize_t>floor(xs[k] * cj + ys[k] * sj
                                       + rho_max + 0.5)] += 1
    return counts
