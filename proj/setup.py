import os
import shutil

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

here = os.path.dirname(os.path.abspath(__file__))

include_dirs = [os.path.join(here, "include")]

# io uses <nlohmann/json.hpp>; fall back to the vendored single header
if not os.path.exists("/usr/include/nlohmann/json.hpp"):
    shim = os.path.join(here, "build", "pip_shim", "nlohmann")
    os.makedirs(shim, exist_ok=True)
    shutil.copyfile(os.path.join(here, "vendor", "json.hpp"),
                    os.path.join(shim, "json.hpp"))
    include_dirs.append(os.path.dirname(shim))

sources = sorted(
    os.path.join("src", f) for f in os.listdir(os.path.join(here, "src")) if f.endswith(".cpp")
) + [os.path.join("python", "bindings.cpp")]

ext = Pybind11Extension(
    "reeblab._reeblab",
    sources,
    include_dirs=include_dirs,
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
