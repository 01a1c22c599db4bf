from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cdgacyc._elim_c", ["src/cdgacyc/_elim_c.pyx"])],
        language_level=3,
    )
except ImportError:
    # The pure-Python kernel is picked up at import time instead.
    ext_modules = []

setup(ext_modules=ext_modules)
