"""Build hook: compile the set kernels when Cython is available.

The package is fully functional without the extension (the pure backend
is selected at import); set ODOTILE_SKIP_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ODOTILE_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "odotile._kernels._setkernels",
                    ["src/odotile/_kernels/_setkernels.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
