"""Dense and matrix-free Hermitian linear algebra.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. The
matrix-free path represents an operator by its action ``v -> A v`` and is used
for tensor-power witnesses whose dense form would be too large to store.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from . import config, kernels
from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    ResourceCapExceeded,
    SolverError,
)


def as_matrix(a):
    """Return ``a`` as a square complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    return m


def check_dim(dim, cap=None):
    cap = config.dim_cap() if cap is None else cap
    if dim > cap:
        raise ResourceCapExceeded(f"dimension {dim} exceeds cap {cap}")
    return dim


def matmul(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def tensor(a, b, cap=None):
    """Kronecker product ``a (x) b``."""
    a, b = as_matrix(a), as_matrix(b)
    check_dim(a.shape[0] * b.shape[0], cap)
    return np.kron(a, b)


def tensor_power(a, n, cap=None):
    a = as_matrix(a)
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    check_dim(a.shape[0] ** n, cap)
    return reduce(np.kron, [a] * n)


def anticommutator(a, b):
    return matmul(a, b) + matmul(b, a)


def hermiticity_error(m):
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian(m, tol=config.HERMITICITY_TOL):
    """Validate that ``m`` is Hermitian to within ``tol`` and return it as an array."""
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"max |M - M^dag| = {err:.3e} exceeds {tol:.1e}")
    return m


def eig_hermitian(m, vectors=False):
    """Ascending real eigenvalues (and orthonormal eigenvectors if ``vectors``)."""
    m = hermitian(m)
    # symmetrise so LAPACK sees an exactly Hermitian input
    m = 0.5 * (m + m.conj().T)
    try:
        if vectors:
            return np.linalg.eigh(m)
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise SolverError(str(exc)) from exc


def min_eigenvalue(m):
    return float(eig_hermitian(m)[0])


def is_psd(m, tol=config.PSD_TOL):
    return min_eigenvalue(m) >= -tol


def check_hermitian_action(apply, dim, probes=3, seed=0, rtol=1e-10):
    """Stochastic check that ``<u, A v> == conj(<v, A u>)`` on random probes."""
    rng = np.random.default_rng(seed)
    for _ in range(probes):
        u = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        au, av = apply(u), apply(v)
        lhs = np.vdot(u, av)
        rhs = np.conj(np.vdot(v, au))
        scale = np.linalg.norm(u) * np.linalg.norm(av) + np.linalg.norm(v) * np.linalg.norm(au)
        if abs(lhs - rhs) > rtol * max(scale, np.finfo(float).tiny):
            raise NotHermitianError(f"operator action fails Hermitian probe: |{lhs} - {rhs}|")


def min_eig_matfree(apply, dim, tol=0.0, maxiter=None, check=True, seed=0):
    """Smallest eigenvalue of a Hermitian operator given only its action.

    Uses implicitly restarted Lanczos (ARPACK) on the smallest algebraic end of
    the spectrum. ``tol`` is ARPACK's relative tolerance; 0 means machine
    precision. Dimensions below 3 are too small for ARPACK and are handled by
    materialising the operator column by column.
    """
    if check:
        check_hermitian_action(apply, dim, seed=seed)
    if dim < 3:
        cols = [apply(e) for e in np.eye(dim, dtype=np.complex128)]
        return float(eig_hermitian(np.column_stack(cols))[0])
    op = LinearOperator((dim, dim), matvec=apply, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    v0 = rng.normal(size=dim) + 0j
    try:
        vals = eigsh(op, k=1, which="SA", tol=tol, maxiter=maxiter, v0=v0, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise SolverError(f"Lanczos did not converge in dimension {dim}") from exc
    return float(np.real(vals[0]))


@dataclass(frozen=True)
class TensorFactoredOperator:
    """The operator ``factors[0] (x) factors[1] (x) ...`` kept in factored form."""

    factors: tuple

    @classmethod
    def power(cls, factor, n):
        factor = as_matrix(factor)
        return cls((factor,) * n)

    @property
    def exponent(self):
        return len(self.factors)

    @property
    def dim(self):
        return int(np.prod([f.shape[0] for f in self.factors]))

    @property
    def uniform_qubit(self):
        first = self.factors[0]
        return first.shape == (2, 2) and all(f is first or np.array_equal(f, first) for f in self.factors)

    def matvec(self, v):
        v = np.asarray(v, dtype=np.complex128)
        if v.shape != (self.dim,):
            raise DimensionMismatchError(f"vector of length {v.shape} for operator of dimension {self.dim}")
        if self.uniform_qubit:
            return kernels.apply_gate_all(v, self.factors[0])
        out = v.reshape([f.shape[1] for f in self.factors])
        for axis, f in enumerate(self.factors):
            out = np.moveaxis(np.tensordot(f, out, axes=([1], [axis])), 0, axis)
        return out.reshape(-1)

    def to_dense(self, cap=None):
        check_dim(self.dim, cap)
        return reduce(np.kron, self.factors)
