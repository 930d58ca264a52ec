"""Build script: compiles the Cython evaluator kernel when possible.

The package works without the extension (propsig.evalcore falls back to
the pure-Python kernel), so any failure here downgrades to a warning
instead of breaking the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/propsig/_evalcy.pyx"],
        language_level=3,
    )
except Exception as exc:  # missing Cython / no C compiler
    warnings.warn(f"building without compiled evaluator kernel: {exc}")

setup(ext_modules=ext_modules)
