import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "wavelab.kernels._core",
        ["src/wavelab/kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        # -ffp-contract=off keeps the C arithmetic bit-compatible with the
        # numpy fallback (no FMA contraction).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
    if cythonize is not None
    else [],
)
