"""Kernel backend selection.

The hot numerical kernels (Fock beamsplitter block fill, multiplexed
detector POVM fill) exist twice: a Cython extension (``_fastcore``) and a
NumPy fallback (``_purecore``) with identical contracts.  The compiled
module is preferred when importable; set ``NOONLAB_PURE=1`` to force the
fallback (used by the benchmark and the equivalence tests).
"""

import os

from . import _purecore

if os.environ.get("NOONLAB_PURE", "0") not in ("", "0"):
    _impl = _purecore
    BACKEND = "python"
else:
    try:
        from . import _fastcore as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _purecore
        BACKEND = "python"

bs_block = _impl.bs_block
povm_matrix = _impl.povm_matrix

__all__ = ["BACKEND", "bs_block", "povm_matrix"]
