"""Build the optional compiled Viterbi kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time); the extension only makes the
simulation loops fast. Set CNECC_SKIP_EXT=1 to skip compilation.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build extensions, degrading to pure Python on any compiler failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernel {ext.name} skipped: {exc}")


extensions = []
if not os.environ.get("CNECC_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "cnecc._kernels._viterbi",
                    ["src/cnecc/_kernels/_viterbi.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        warnings.warn("Cython not available; building without compiled kernel")

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
