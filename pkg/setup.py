import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementations in localcd._kernels_py when the extension is absent.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    extensions = [
        Extension(
            "localcd._kernels_cy",
            ["src/localcd/_kernels_cy.pyx"],
            include_dirs=[np.get_include()],
            # -ffp-contract=off keeps float results bit-identical with the
            # pure-Python fallback (no FMA contraction).
            extra_compile_args=["-O3", "-ffp-contract=off"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    ext_modules = cythonize(
        extensions,
        language_level="3",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )

setup(ext_modules=ext_modules)
