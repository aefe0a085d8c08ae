"""Build script for the optional compiled kernels.

The package works without them: if Cython or a C compiler is missing the
extension is skipped and :mod:`roosperm._pykernels` is used at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ROOSPERM_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "roosperm._kernels",
                    ["src/roosperm/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
