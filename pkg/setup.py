"""Build script: compiles the optional search kernel.

The package works without the extension (a pure-Python twin is selected at
import time), so a missing compiler or Cython must not break installation.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class _OptionalBuildExt(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: accelerated kernel not built ({exc}); "
              "falling back to the pure-Python backend")


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available; skipping accelerated kernel")
        return []
    ext = Extension(
        "gridmp._kernel._accel",
        ["src/gridmp/_kernel/_accel.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": _OptionalBuildExt},
)
