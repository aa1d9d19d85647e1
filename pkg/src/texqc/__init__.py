"""texqc: defect detection for monochromatic 3D-textured (Jacquard) fabric.

Dual-camera frames are denoised, edge-extracted and thinned to a skeleton,
summarized by a Hough direction-density signature, reduced to 12
statistics, and classified by a one-hidden-layer perceptron.
"""

from .image import BinaryImage, FramePair, GrayImage, read_pgm, write_pgm
from .kernels import BACKEND
from .pipeline import (Decision, EvalReport, PipelineConfig, StopEvent,
                       benchmark, detect, evaluate, run_stream)
from .preproc import PreprocConfig

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BinaryImage",
    "Decision",
    "EvalReport",
    "FramePair",
    "GrayImage",
    "PipelineConfig",
    "PreprocConfig",
    "StopEvent",
    "benchmark",
    "detect",
    "evaluate",
    "read_pgm",
    "run_stream",
    "write_pgm",
    "__version__",
]
