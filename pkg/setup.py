from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # no Cython at build time: install pure-python only, the package falls
    # back to the interpreted kernels at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "satdes._detkernel",
                ["src/satdes/_detkernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
