"""Anticommutator witnesses ``J = {rho_X, rho_Z}`` and their many-copy variants.

Three families are supported:

``plain``
    ``{rho_X, rho_Z}`` on a single system.
``tensor-power``
    ``{rho_X^(x)n, rho_Z^(x)n}``. Because ``A^(x)n B^(x)n = (AB)^(x)n`` the
    action on a vector only needs the two 2x2 products ``AB`` and ``BA``.
``correlated``
    ``{W_x rho_X^(x)n W_x^dag, W_z rho_Z^(x)n W_z^dag}`` with ``W`` a CNOT
    cascade controlled by the first qubit.

Dense matrices are built up to ``config.DENSE_CROSSOVER``; above it the
witness is kept as a matrix-free action and its spectrum is probed by Lanczos.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import config, kernels, linalg
from .errors import DimensionMismatchError
from .states import Axis, mixed_family

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
IDENTITY_2 = np.eye(2, dtype=np.complex128)
PROJ_0 = np.diag([1.0, 0.0]).astype(np.complex128)
PROJ_1 = np.diag([0.0, 1.0]).astype(np.complex128)


class Family(str, Enum):
    PLAIN = "plain"
    TENSOR_POWER = "tensor-power"
    CORRELATED = "correlated"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).replace("_", "-").lower())


class Pairing(str, Enum):
    """Which cascade conjugates which state in the correlated witness.

    Both cascades permute the product eigenbasis of the state they act on, so
    the conjugated states stay classically correlated either way.

    ``ghz``: ``U`` (control ``|0>/|1>``, X targets) acts on ``rho_Z`` and ``V``
    (control ``|+>/|->``, Z targets) acts on ``rho_X``. The first qubit's
    eigenbasis label is copied onto every other qubit. This reproduces the
    published coefficients of the correlated fit.

    ``literal``: ``U`` on ``rho_X`` and ``V`` on ``rho_Z``. The first qubit's
    label is flipped by the parity of the others.
    """

    GHZ = "ghz"
    LITERAL = "literal"


@dataclass(frozen=True)
class ControlledString:
    """``|c0><c0| (x) I + |c1><c1| (x) P^(x)(n-1)`` with control on qubit 0.

    ``basis`` is the 2x2 unitary whose columns are ``|c0>, |c1>``.
    """

    n: int
    basis: np.ndarray
    target: np.ndarray

    def apply(self, vec):
        vec = np.asarray(vec, dtype=np.complex128)
        if self.n == 1:
            return vec.copy()
        half = vec.shape[0] // 2
        w = self.basis
        work = (w.conj().T @ vec.reshape(2, half)).reshape(-1)
        work[half:] = kernels.apply_gate_all(work[half:], self.target)
        return (w @ work.reshape(2, half)).reshape(-1)

    def to_dense(self, cap=None):
        if self.n == 1:
            return IDENTITY_2.copy()
        linalg.check_dim(2**self.n, cap)
        c0 = np.outer(self.basis[:, 0], self.basis[:, 0].conj())
        c1 = np.outer(self.basis[:, 1], self.basis[:, 1].conj())
        rest = linalg.tensor_power(self.target, self.n - 1, cap)
        return np.kron(c0, np.eye(2 ** (self.n - 1))) + np.kron(c1, rest)


def cascade_u(n):
    """CNOT cascade: control ``|0>/|1>`` on qubit 0, X on every other qubit."""
    return ControlledString(n, IDENTITY_2, PAULI_X)


def cascade_v(n):
    """Control ``|+>/|->`` on qubit 0, Z on every other qubit."""
    return ControlledString(n, HADAMARD, PAULI_Z)


def correlating_unitaries(n, cap=None):
    """Dense ``(U, V)`` for ``n`` qubits."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return cascade_u(n).to_dense(cap), cascade_v(n).to_dense(cap)


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    family: Family
    n: int
    dim: int
    dense: Optional[np.ndarray] = None
    action: Optional[Callable] = field(default=None, repr=False)
    source: tuple = ()
    expected_trace: float = float("nan")

    @property
    def matrix_free(self):
        return self.dense is None

    def matvec(self, v):
        if self.dense is not None:
            return self.dense @ np.asarray(v, dtype=np.complex128)
        return self.action(v)

    def to_dense(self, cap=None):
        if self.dense is not None:
            return self.dense
        linalg.check_dim(self.dim, cap)
        return np.column_stack([self.action(e) for e in np.eye(self.dim, dtype=np.complex128)])

    def min_eigenvalue(self):
        if self.dense is not None:
            return linalg.min_eigenvalue(self.dense)
        return linalg.min_eig_matfree(self.action, self.dim)

    def eigenvalues(self):
        return linalg.eig_hermitian(self.to_dense())


@dataclass(frozen=True)
class QuantumnessVerdict:
    min_eigenvalue: float
    is_quantum: bool
    tolerance: float
    solver: str = "dense"
    boundary: bool = False

    def as_dict(self):
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "is_quantum": self.is_quantum,
            "tolerance": self.tolerance,
            "solver": self.solver,
            "boundary": self.boundary,
        }


def _check_pair(rho_x, rho_z):
    if rho_x.dim != rho_z.dim:
        raise DimensionMismatchError(f"states of dimension {rho_x.dim} and {rho_z.dim}")


def anticommutator_witness(rho_x, rho_z):
    _check_pair(rho_x, rho_z)
    a, b = rho_x.matrix, rho_z.matrix
    j = linalg.anticommutator(a, b)
    return WitnessOperator(
        Family.PLAIN, 1, rho_x.dim, dense=j, source=(rho_x, rho_z),
        expected_trace=float(2 * np.real(np.trace(a @ b))),
    )


def tensor_power_witness(rho_x, rho_z, n, crossover=None, cap=None):
    _check_pair(rho_x, rho_z)
    if n < 1:
        raise ValueError("n must be >= 1")
    crossover = config.DENSE_CROSSOVER if crossover is None else crossover
    dim = linalg.check_dim(rho_x.dim**n, cap)
    a, b = rho_x.matrix, rho_z.matrix
    ab, ba = a @ b, b @ a
    trace = float(2 * np.real(np.trace(ab)) ** n)
    if n == 1:
        w = anticommutator_witness(rho_x, rho_z)
        return WitnessOperator(Family.TENSOR_POWER, 1, w.dim, dense=w.dense, source=w.source,
                               expected_trace=w.expected_trace)
    if dim <= crossover:
        dense = linalg.tensor_power(ab, n, cap) + linalg.tensor_power(ba, n, cap)
        return WitnessOperator(Family.TENSOR_POWER, n, dim, dense=dense, source=(rho_x, rho_z),
                               expected_trace=trace)
    ab_n = linalg.TensorFactoredOperator.power(ab, n)
    ba_n = linalg.TensorFactoredOperator.power(ba, n)

    def action(v):
        return ab_n.matvec(v) + ba_n.matvec(v)

    return WitnessOperator(Family.TENSOR_POWER, n, dim, action=action, source=(rho_x, rho_z),
                           expected_trace=trace)


def _cascades(n, pairing):
    pairing = Pairing(pairing)
    if pairing is Pairing.GHZ:
        return cascade_v(n), cascade_u(n)
    return cascade_u(n), cascade_v(n)


def correlated_witness(rho_x, rho_z, n, pairing=Pairing.GHZ, crossover=None, cap=None):
    """Witness of the cascade-conjugated tensor powers (qubit inputs)."""
    _check_pair(rho_x, rho_z)
    if rho_x.dim != 2:
        raise DimensionMismatchError("correlating cascades are defined for qubits only")
    if n < 1:
        raise ValueError("n must be >= 1")
    crossover = config.DENSE_CROSSOVER if crossover is None else crossover
    dim = linalg.check_dim(2**n, cap)
    wx, wz = _cascades(n, pairing)
    a_n = linalg.TensorFactoredOperator.power(rho_x.matrix, n)
    b_n = linalg.TensorFactoredOperator.power(rho_z.matrix, n)
    if n == 1:
        w = anticommutator_witness(rho_x, rho_z)
        return WitnessOperator(Family.CORRELATED, 1, 2, dense=w.dense, source=w.source,
                               expected_trace=w.expected_trace)

    def conj_x(v):
        return wx.apply(a_n.matvec(wx.apply(v)))

    def conj_z(v):
        return wz.apply(b_n.matvec(wz.apply(v)))

    # both cascades are involutions (W^dag = W), hence W A W in conj_*
    if dim <= crossover:
        ux, uz = wx.to_dense(cap), wz.to_dense(cap)
        a = ux @ a_n.to_dense(cap) @ ux.conj().T
        b = uz @ b_n.to_dense(cap) @ uz.conj().T
        dense = a @ b + b @ a
        return WitnessOperator(Family.CORRELATED, n, dim, dense=dense, source=(rho_x, rho_z),
                               expected_trace=float(2 * np.real(np.trace(a @ b))))

    def action(v):
        return conj_x(conj_z(v)) + conj_z(conj_x(v))

    return WitnessOperator(Family.CORRELATED, n, dim, action=action, source=(rho_x, rho_z))


def correlated_states(rho_x, rho_z, n, pairing=Pairing.GHZ, cap=None):
    """Dense conjugated tensor powers ``(W_x rho_X^n W_x^dag, W_z rho_Z^n W_z^dag)``."""
    wx, wz = _cascades(n, pairing)
    ux, uz = wx.to_dense(cap), wz.to_dense(cap)
    return rho_x.tensor_power(n).conjugate(ux), rho_z.tensor_power(n).conjugate(uz)


def build_witness(family, n, p_x, p_z=None, pairing=Pairing.GHZ, crossover=None, cap=None):
    """Witness for the qubit mixed family: ``rho_X`` along |+>, ``rho_Z`` along |0>."""
    family = Family.parse(family)
    p_z = p_x if p_z is None else p_z
    rho_x, rho_z = mixed_family(p_x, Axis.X), mixed_family(p_z, Axis.Z)
    if family is Family.PLAIN:
        if n != 1:
            raise ValueError("plain witness is single-copy (n = 1)")
        return anticommutator_witness(rho_x, rho_z)
    if family is Family.TENSOR_POWER:
        return tensor_power_witness(rho_x, rho_z, n, crossover=crossover, cap=cap)
    return correlated_witness(rho_x, rho_z, n, pairing=pairing, crossover=crossover, cap=cap)


def assess(w, tol=config.PSD_TOL):
    """Quantumness verdict: quantum iff the smallest eigenvalue is below ``-tol``."""
    lo = w.min_eigenvalue()
    return QuantumnessVerdict(
        min_eigenvalue=lo,
        is_quantum=lo < -tol,
        tolerance=tol,
        solver="matrix-free" if w.matrix_free else "dense",
        boundary=abs(lo) <= tol,
    )
