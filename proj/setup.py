"""Builds the compiled extension through the project's CMake tree.

Everything declarative lives in pyproject.toml; this file only teaches
setuptools how to produce risbo._risbo via CMake.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        build_dir = Path(self.build_temp) / ext.name
        build_dir.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                ext.sourcedir,
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_risbo", "-j", "1"],
            cwd=build_dir,
            check=True,
        )

        # The CMake tree collects the module under python/risbo/.
        built = sorted((build_dir / "python" / "risbo").glob("_risbo*"))
        if not built:
            raise RuntimeError("CMake did not produce the _risbo module")
        destination = Path(self.get_ext_fullpath(ext.name))
        destination.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], destination)


setup(
    ext_modules=[CMakeExtension("risbo._risbo")],
    cmdclass={"build_ext": CMakeBuild},
)
