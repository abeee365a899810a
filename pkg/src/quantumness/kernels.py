"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable. Setting
``QUANTUMNESS_PURE_PYTHON=1`` forces the numpy implementation.
"""
import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("QUANTUMNESS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def apply_gate_all(vec, gate):
    """Apply the 2x2 ``gate`` to every qubit of the state vector ``vec``."""
    vec = np.ascontiguousarray(vec, dtype=np.complex128)
    gate = np.ascontiguousarray(gate, dtype=np.complex128)
    return _impl.apply_gate_all(vec, gate)


def permuted_product_trace(mats, src):
    """Return ``sum_r prod_k mats[k][digit_k(src[r]), digit_k(r)]``.

    Registers are ordered most-significant first, so this is ``tr[P (m_1 x
    ... x m_l)]`` for the basis permutation ``P`` whose inverse map is ``src``.
    """
    mats = np.ascontiguousarray(mats, dtype=np.complex128)
    src = np.ascontiguousarray(src, dtype=np.int64)
    return _impl.permuted_product_trace(mats, src)

__all__ = ["BACKEND", "apply_gate_all", "permuted_product_trace"]
