"""Builds the cfie._core extension by driving the repository's CMake build."""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DCFIE_BUILD_CLI=OFF",
                "-DCFIE_BUILD_TESTS=OFF",
                "-DCFIE_BUILD_PYTHON=ON",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "cfie_python", "--parallel"],
            cwd=build_dir,
            check=True,
        )

        staged = sorted((build_dir / "python_pkg" / "cfie").glob("_core*"))
        if not staged:
            raise RuntimeError("CMake build did not produce the _core extension")
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        ext_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(staged[0], ext_path)


setup(
    ext_modules=[CMakeExtension("cfie._core")],
    cmdclass={"build_ext": CMakeBuild},
)
