"""Build script for the optional compiled kernels.

The Cython extension is marked optional: if Cython, numpy headers or a C
compiler are missing, the package still installs and ``mtfp.kernels`` falls
back to the pure-Python implementation at import time.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "mtfp._kernels",
                ["src/mtfp/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
