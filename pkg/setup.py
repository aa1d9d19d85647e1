import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TEXQC_SKIP_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("texqc._core", ["src/texqc/_core.pyx"],
                   include_dirs=[np.get_include()])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
