"""Build shim: compiles the optional fast kernel, degrading to pure Python."""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "hyperham._kernels.fastcore",
                ["src/hyperham/_kernels/fastcore.pyx"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"fast kernel skipped ({exc!r}); pure-Python backend will be used")

setup(ext_modules=extensions)
