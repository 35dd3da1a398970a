"""Builds the _core extension directly from the C++ sources.

Compiling the core into the extension keeps `pip install -e .
--no-build-isolation` free of any CMake dependency; the CMake build remains
the way to get the CLI and the test suites.
"""

from glob import glob

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

ParallelCompile("PEBFCS_NUM_BUILD_JOBS", default=4).install()

ext = Pybind11Extension(
    "pebfcs._core",
    sorted(glob("src/*.cpp")),
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
