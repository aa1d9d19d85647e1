"""Backend selection for the hot raster kernels.

The compiled Cython extension (texqc._core) is preferred; the NumPy
implementation (texqc._pure) is the fallback. Set TEXQC_PURE_PYTHON=1 to
force the fallback. Both backends are bit-identical by contract.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("TEXQC_PURE_PYTHON"):
    _backend = _pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _backend  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _backend = _pure
        BACKEND = "pure"

convolve_u8 = _backend.convolve_u8
laplacian_u8 = _backend.laplacian_u8
zhang_suen = _backend.zhang_suen
resolve_blocks = _backend.resolve_blocks
hough_votes = _backend.hough_votes
