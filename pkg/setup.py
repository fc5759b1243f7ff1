import sys

from setuptools import setup

# The compiled kernel is optional: stitkit falls back to the pure-Python
# backend when the extension is missing (see stitkit/kernel.py).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/stitkit/_ckernel.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover
    print(f"warning: building without compiled kernel ({exc})", file=sys.stderr)
    ext_modules = []

setup(ext_modules=ext_modules)
