"""Build shim: compiles the optional Cython fast path for the hot kernels.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile only costs speed.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pseudoht._kernels_ext",
                ["src/pseudoht/_kernels_ext.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
