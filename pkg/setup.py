"""Build script: compiles the optional matching kernel.

The package is pure Python except for one hot loop, the subset-DP used by
the exact minimum-weight perfect matcher.  If Cython (or a C compiler) is
unavailable the extension is skipped and the pure-Python kernel in
``wplzx.masd._dp`` is used instead; everything still works, just slower.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "wplzx.masd._dpmatch",
                ["src/wplzx/masd/_dpmatch.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
