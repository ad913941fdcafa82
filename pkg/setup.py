"""Build script.

The package is pure Python except for one optional Cython extension,
simkno._kernel._core, which accelerates the truth-set kernel.  If Cython
(or a C compiler) is unavailable the build quietly skips the extension
and the package falls back to the pure-Python kernel at import time.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/simkno/_kernel/_core.pyx"],
        compiler_directives={"language_level": 3},
    )


class optional_build_ext(build_ext):
    """Tolerate a missing or broken C toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"warning: skipping C extension ({exc}); using pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"warning: skipping {ext.name} ({exc}); using pure-Python kernel")


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
