"""Build script: compiles the literal-search kernel; falls back to pure Python.

The compiled extension is optional.  If Cython or a C compiler is missing the
package still installs and selects the pure-Python kernel at import time.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/rulerank/_search_fast.pyx"],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
            "language_level": 3,
        },
    )
except ImportError:
    print("rulerank: Cython not available, installing pure-Python only", file=sys.stderr)

setup(ext_modules=ext_modules)
