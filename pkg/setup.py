from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "moltwave._scan",
                ["src/moltwave/_scan.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython at build time: the package falls back to the pure-Python
    # scan kernel selected at import.
    ext_modules = []

setup(ext_modules=ext_modules)
