from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "crossdiff._kernels._fast",
        ["src/crossdiff/_kernels/_fast.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
