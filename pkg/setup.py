from setuptools import Extension, setup

# The compiled kernels are an optional speedup: qchains._backend falls back to
# the pure-Python twin (_kernels_py) when the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qchains._kernels",
                ["src/qchains/_kernels.pyx"],
                optional=True,
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
