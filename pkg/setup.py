from setuptools import setup, Extension

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "regraph._sweep",
                ["src/regraph/_sweep.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python fallback kernel is used when the extension is unavailable.
    extensions = []

setup(ext_modules=extensions)
