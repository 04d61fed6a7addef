"""Build script for the optional compiled kernel.

The package works without it: when Cython or a C compiler is missing the
extension is skipped and the pure-Python simulation loop is used.
"""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernel not built ({exc}); using pure-Python fallback", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using pure-Python fallback", file=sys.stderr)


def extensions():
    if os.environ.get("WINDLOITER_PURE_PYTHON"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    # no FMA contraction and no sin+cos -> sincos fusion: keeps results
    # bit-identical with the Python path
    ext = Extension(
        "windloiter._kernels",
        ["src/windloiter/_kernels.pyx"],
        extra_compile_args=["-O2", "-ffp-contract=off", "-fno-builtin-sin", "-fno-builtin-cos"],
        libraries=["m"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
