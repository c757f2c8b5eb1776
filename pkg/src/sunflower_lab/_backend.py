"""Kernel selection: compiled when importable, pure Python otherwise.

Set SUNFLOWER_LAB_PURE=1 to force the pure-Python kernels.
"""

import os

from . import _pykernels as pure

compiled = None
if not os.environ.get("SUNFLOWER_LAB_PURE"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

kernels = compiled if compiled is not None else pure
BACKEND = kernels.BACKEND


def search_kernels(n: int):
    """Kernels able to run a search over ground set [n]."""
    if kernels is compiled and n > 64:
        return pure
    return kernels
