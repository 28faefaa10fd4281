import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension(
            "hkgtower._serieskernel",
            ["src/hkgtower/_serieskernel.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
        )],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    # the package falls back to the numpy kernels at import time
    ext_modules = []

setup(ext_modules=ext_modules)
