import os
from pathlib import Path

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include() -> str:
    override = os.environ.get("EIGEN3_INCLUDE_DIR")
    candidates = [override] if override else []
    candidates += ["/usr/include/eigen3", "/usr/local/include/eigen3"]
    for c in candidates:
        if c and (Path(c) / "Eigen" / "Core").exists():
            return c
    raise RuntimeError("Eigen headers not found; set EIGEN3_INCLUDE_DIR")


sources = ["python/module.cpp"] + sorted(str(p) for p in Path("src").glob("*.cpp"))

ext = Pybind11Extension(
    "cfent._core",
    sources,
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
