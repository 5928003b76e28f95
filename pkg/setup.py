"""Build the optional compiled kernel for quadruple enumeration.

The package works without it: focalgroups.metric falls back to a numpy
implementation when the extension is missing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "focalgroups._speedups",
                ["src/focalgroups/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
