"""Pure-numpy versions of the inner loops in ``_ckernels``."""
import numpy as np


def apply_gate_all(vec, gate):
    """Apply one 2x2 ``gate`` to every qubit of ``vec`` (length 2**k)."""
    vec = np.asarray(vec, dtype=np.complex128)
    k = vec.shape[0].bit_length() - 1
    out = vec.reshape((2,) * k) if k else vec.copy()
    gate = np.asarray(gate, dtype=np.complex128)
    for axis in range(k):
        out = np.moveaxis(np.tensordot(gate, out, axes=([1], [axis])), 0, axis)
    return np.ascontiguousarray(out).reshape(-1)


def permuted_product_trace(mats, src):
    """Sum over r of prod_k mats[k][digit_k(src[r]), digit_k(r)]."""
    mats = np.asarray(mats, dtype=np.complex128)
    l, d, _ = mats.shape
    src = np.asarray(src, dtype=np.int64)
    shape = (d,) * l
    cols = np.unravel_index(np.arange(src.shape[0]), shape)
    rows = np.unravel_index(src, shape)
    term = np.ones(src.shape[0], dtype=np.complex128)
    for k in range(l):
        term *= mats[k][rows[k], cols[k]]
    return complex(term.sum())
