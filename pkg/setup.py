"""Build script: compiles the optional Cython kernel module.

The compiled extension (rainbowpath._fastcore) accelerates the hot loops
(batch density evaluation, transfer line-search scans). If Cython or a C
compiler is unavailable the build proceeds without it and the package
falls back to the numpy backend at import time.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/rainbowpath/_fastcore.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )
except Exception as exc:  # pragma: no cover - depends on build host
    sys.stderr.write(f"rainbowpath: skipping compiled kernels ({exc}); numpy fallback will be used\n")

setup(ext_modules=ext_modules)
