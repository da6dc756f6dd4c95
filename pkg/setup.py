"""Build script for the optional compiled trajectory/LCS kernels.

The package works without the extension (a pure-Python fallback is selected
at import time); the extension just makes dense per-frame sampling and LCS
table fills faster.
"""

from setuptools import setup
from setuptools.extension import Extension

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "sceneweave.kernels._fast",
                ["src/sceneweave/kernels/_fast.pyx"],
                # results must match the pure-Python fallback bit-for-bit:
                # no FMA contraction, no sin+cos -> sincos fusion (glibc's
                # sincos is 1 ulp off separate calls), no libmvec
                extra_compile_args=["-O2", "-ffp-contract=off",
                                    "-fno-builtin-sin", "-fno-builtin-cos",
                                    "-fno-builtin-sincos",
                                    "-fno-tree-vectorize"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
