import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "d2dcoop._core",
    sources=sorted(glob.glob("src/*.cpp")) + ["python/module.cpp"],
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(
    packages=["d2dcoop"],
    package_dir={"d2dcoop": "python/d2dcoop"},
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
)
