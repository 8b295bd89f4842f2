from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("kfks._kernels", ["src/kfks/_kernels.pyx"])],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except ImportError:
    # No Cython available: install pure-Python; the package falls back to
    # the numpy kernels at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
