"""Build script for the optional compiled kernels.

The package works without the extension (a pure NumPy fallback is selected at
import time), so the build is marked optional and failures are non-fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    ext = Extension(
        "oride_attack.kernels._speedups",
        ["src/oride_attack/kernels/_speedups.pyx"],
        # -ffp-contract=off keeps the C results bit-identical to the NumPy
        # fallback (no FMA contraction of a*b+c).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    ext.optional = True
    extensions = cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)
