"""Build the optional compiled kernel.

    pip install -e . --no-build-isolation

If Cython or a C compiler is missing the package still installs and runs on
the pure-Python kernel.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("OSCHEN_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "oschen._modp",
                    ["src/oschen/_modp.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
