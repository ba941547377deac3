"""Build the optional compiled kernels.

The package works without them; ``wpolar.kernels`` falls back to the
numpy implementation when the extension is missing.

    python3 setup.py build_ext --inplace
"""
import os
import sys

from setuptools import setup


def _extensions():
    if os.environ.get("WPOLAR_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("cython/numpy unavailable, skipping compiled kernels", file=sys.stderr)
        return []
    ext = Extension(
        "wpolar._ckernels",
        ["src/wpolar/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=_extensions())
