"""Build the optional compiled kernel; the package works without it."""
from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/intercalc/_ckernel.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
