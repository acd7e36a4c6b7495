"""Build hook: compiles the optional search kernel when Cython is available.

The package is fully functional without the extension; the pure-Python
search engine is selected at import time when the compiled one is missing.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/sftkit/_search_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    # No Cython (or no compiler): ship pure Python only.
    ext_modules = []

setup(ext_modules=ext_modules)
