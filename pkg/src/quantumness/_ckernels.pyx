# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Same signatures as ``_pykernels``.

Complex arithmetic is spelled out on interleaved (re, im) doubles; C99
complex multiplication would otherwise go through the slow NaN-checking
``__muldc3`` path.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_gate_all(const double complex[::1] vec, const double complex[:, ::1] gate):
    """Apply one 2x2 ``gate`` to every qubit of ``vec`` (length 2**k)."""
    cdef Py_ssize_t size = vec.shape[0]
    out_arr = np.array(vec, dtype=np.complex128, copy=True)
    cdef double[::1] view = out_arr.view(np.float64)
    cdef double *v = &view[0] if size else NULL
    cdef double g00r = gate[0, 0].real, g00i = gate[0, 0].imag
    cdef double g01r = gate[0, 1].real, g01i = gate[0, 1].imag
    cdef double g10r = gate[1, 0].real, g10i = gate[1, 0].imag
    cdef double g11r = gate[1, 1].real, g11i = gate[1, 1].imag
    cdef double ar, ai, br, bi
    cdef Py_ssize_t stride = size >> 1, block, i, j
    with nogil:
        while stride >= 1:
            block = 0
            while block < size:
                for i in range(2 * block, 2 * (block + stride), 2):
                    j = i + 2 * stride
                    ar = v[i]
                    ai = v[i + 1]
                    br = v[j]
                    bi = v[j + 1]
                    v[i] = g00r * ar - g00i * ai + g01r * br - g01i * bi
                    v[i + 1] = g00r * ai + g00i * ar + g01r * bi + g01i * br
                    v[j] = g10r * ar - g10i * ai + g11r * br - g11i * bi
                    v[j + 1] = g10r * ai + g10i * ar + g11r * bi + g11i * br
                block += 2 * stride
            stride >>= 1
    return out_arr


def permuted_product_trace(const double complex[:, :, ::1] mats, const cnp.int64_t[::1] src):
    """Sum over r of prod_k mats[k][digit_k(src[r]), digit_k(r)]."""
    cdef Py_ssize_t l = mats.shape[0], d = mats.shape[1]
    cdef Py_ssize_t total = src.shape[0], r, k, rr, cc
    cdef double acc_r = 0, acc_i = 0, tr, ti, mr, mi, tmp
    cdef cnp.int64_t row, col
    with nogil:
        for r in range(total):
            tr = 1
            ti = 0
            row = src[r]
            col = r
            for k in range(l - 1, -1, -1):
                rr = row % d
                cc = col % d
                row = row // d
                col = col // d
                mr = mats[k, rr, cc].real
                mi = mats[k, rr, cc].imag
                tmp = tr * mr - ti * mi
                ti = tr * mi + ti * mr
                tr = tmp
            acc_r += tr
            acc_i += ti
    return complex(acc_r, acc_i)
