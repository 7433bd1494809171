"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a vectorized numpy fallback is
selected at import time), so any failure to build it should not block
installation.  ``pip install -e . --no-build-isolation`` with Cython and
numpy present produces the compiled core.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "gaborscatter._kernels",
                ["src/gaborscatter/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    # No Cython/numpy at build time: ship pure Python, the runtime fallback
    # in gaborscatter.kernels takes over.
    ext_modules = []

setup(ext_modules=ext_modules)
