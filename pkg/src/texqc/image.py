"""Grayscale/binary image containers and binary PGM (P5) I/O."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PgmError(ValueError):
    """Malformed PGM input."""


@dataclass(frozen=True)
class GrayImage:
    """8-bit grayscale raster, row-major, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must be a 2-D array with positive dimensions")
        if px.dtype != np.uint8:
            if px.min() < 0 or px.max() > 255:
                raise ValueError("intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", np.ascontiguousarray(px))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, GrayImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class BinaryImage:
    """Binary raster: 0 background, 1 foreground, shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must be a 2-D array with positive dimensions")
        vals = np.unique(px)
        if not np.all(np.isin(vals, (0, 1))):
            raise ValueError("binary image values must be 0 or 1")
        object.__setattr__(self, "pixels", np.ascontiguousarray(px.astype(np.uint8)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def foreground_count(self) -> int:
        return int(self.pixels.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryImage) and np.array_equal(self.pixels, other.pixels)


@dataclass(frozen=True)
class FramePair:
    """Simultaneous views of the same fabric region from the two cameras."""

    a: GrayImage
    b: GrayImage


def _read_tokens(data: bytes, n: int):
    """Pull n whitespace-separated header tokens, skipping '#' comments.

    Returns (tokens, offset of the byte after the single whitespace
    terminating the last token).
    """
    tokens = []
    i = 0
    while len(tokens) < n:
        if i >= len(data):
            raise PgmError("unexpected end of header")
        c = data[i:i + 1]
        if c == b"#":
            while i < len(data) and data[i:i + 1] != b"\n":
                i += 1
            i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < len(data) and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    # exactly one whitespace byte separates the header from the payload
    if i >= len(data) or not data[i:i + 1].isspace():
        raise PgmError("missing whitespace after maxval")
    return tokens, i + 1


def read_pgm(data: bytes) -> GrayImage:
    """Parse a binary PGM (P5) byte string."""
    if data[:2] != b"P5":
        raise PgmError("not a P5 PGM file (bad magic)")
    tokens, offset = _read_tokens(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise PgmError("non-numeric header field") from None
    if width <= 0 or height <= 0:
        raise PgmError(f"non-positive dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise PgmError(f"unsupported maxval {maxval}")
    payload = data[2 + offset:2 + offset + width * height]
    if len(payload) < width * height:
        raise PgmError("truncated pixel payload")
    px = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    return GrayImage(px.copy())


def write_pgm(img: GrayImage) -> bytes:
    """Serialize to canonical P5: 'P5\\n<w> <h>\\n255\\n' + raw bytes."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def binary_to_gray(b: BinaryImage) -> GrayImage:
    """Foreground renders as 255 so skeletons are viewable with stock tools."""
    return GrayImage(b.pixels * np.uint8(255))


def gray_to_binary(g: GrayImage) -> BinaryImage:
    """Inverse of binary_to_gray: any nonzero pixel is foreground."""
    return BinaryImage((g.pixels > 0).astype(np.uint8))
