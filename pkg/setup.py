"""Build script.

The compiled kernel extension is optional: if Cython or a C compiler is
unavailable the install still succeeds and the package falls back to the
pure Python kernels at import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, otherwise warn and continue."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "compiled kernels unavailable, falling back to pure Python "
            f"({exc})",
            stacklevel=1,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "anyonspec.specfun._kernels",
        ["src/anyonspec/specfun/_kernels.pyx"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
