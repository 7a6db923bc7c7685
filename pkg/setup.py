"""Build hook for the optional compiled kernels.

The clustering hot path ships as a Cython extension with a pure-Python
fallback, so a failed compile must never break the install.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building the compiled kernels failed ({exc}); "
            "falling back to the pure-Python implementation.",
            file=sys.stderr,
        )


def extensions():
    if os.environ.get("EXPLORA_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "explora.kernels._ckernels",
        sources=["src/explora/kernels/_ckernels.pyx"],
        # -ffp-contract=off keeps results bit-compatible with the Python
        # fallback (no FMA contraction in the dot products).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
