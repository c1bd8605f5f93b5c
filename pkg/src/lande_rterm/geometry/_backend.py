"""Pick the compiled kernels when available, else the numpy ones.

Set ``LANDE_RTERM_PURE=1`` to force the numpy implementation.
"""

import os

from . import _kernels_py

if os.environ.get("LANDE_RTERM_PURE"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"
    else:
        BACKEND = "cython"
