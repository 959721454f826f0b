"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so any build failure here is downgraded to a warning.
"""

import sys

from setuptools import Extension, setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("hemicontact: Cython not available, building without compiled kernels",
              file=sys.stderr)
        return []
    return cythonize(
        [
            Extension(
                "hemicontact._kernels._core",
                ["src/hemicontact/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=_extensions())
