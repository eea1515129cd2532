import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext = Extension(
    "odeco._contract",
    ["src/odeco/_contract.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"],
)
# a failed build degrades to the pure-NumPy backend instead of failing
# the install
ext.optional = True

if cythonize is not None:
    extensions = cythonize([ext], language_level=3)
else:
    c_path = os.path.join("src", "odeco", "_contract.c")
    if os.path.exists(c_path):
        ext.sources = [c_path]
        extensions = [ext]
    else:
        extensions = []

setup(ext_modules=extensions)
