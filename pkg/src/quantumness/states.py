"""Density matrices and the qubit state families used by the witness."""
from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

from . import linalg
from .errors import InvalidStateError

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9

KET_0 = np.array([1.0, 0.0], dtype=np.complex128)
KET_1 = np.array([0.0, 1.0], dtype=np.complex128)
KET_PLUS = np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2)
KET_MINUS = np.array([1.0, -1.0], dtype=np.complex128) / math.sqrt(2)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one positive semidefinite Hermitian matrix.

    Validation runs on construction; pass ``validate=False`` only for
    matrices that are correct by construction (e.g. unitary conjugates of a
    validated state).
    """

    matrix: np.ndarray
    validate: bool = True

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.validate:
            try:
                linalg.hermitian(m)
            except linalg.NotHermitianError as exc:
                raise InvalidStateError(str(exc)) from exc
            tr = np.trace(m)
            if abs(tr - 1) > TRACE_TOL:
                raise InvalidStateError(f"trace {tr} differs from 1")
            lo = linalg.min_eigenvalue(m)
            if lo < -POSITIVITY_TOL:
                raise InvalidStateError(f"negative eigenvalue {lo:.3e}")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def eigenvalues(self):
        return linalg.eig_hermitian(self.matrix)

    def bloch_vector(self):
        """Components ``(r_x, r_y, r_z)`` with ``rho = (I + r.sigma)/2`` (qubits only)."""
        if self.dim != 2:
            raise ValueError("Bloch vector is only defined for qubits")
        m = self.matrix
        return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])

    def conjugate(self, unitary):
        """Return ``U rho U^dag``."""
        u = linalg.as_matrix(unitary)
        return DensityMatrix(u @ self.matrix @ u.conj().T, validate=False)

    def tensor_power(self, n):
        return DensityMatrix(linalg.tensor_power(self.matrix, n), validate=False)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class Axis(str, Enum):
    X = "x"  # pure component |+>
    Z = "z"  # pure component |0>

    @property
    def ket(self):
        return KET_PLUS if self is Axis.X else KET_0


@dataclass(frozen=True)
class MixedFamilyParams:
    p: float
    axis: Axis = Axis.Z

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidStateError(f"mixedness parameter p={self.p} outside [0, 1]")
        object.__setattr__(self, "axis", Axis(self.axis))

    def build(self):
        return mixed_family(self.p, self.axis)


def pure_state(vector):
    """Projector onto the normalised ``vector``."""
    psi = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidStateError("cannot build a pure state from the zero vector")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, psi.conj()))


def maximally_mixed(d):
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d)


def mixed_family(p, axis=Axis.Z):
    """Qubit state ``(1 - p)/2 I + p |a><a|`` with ``|a>`` = ``|+>`` (X) or ``|0>`` (Z)."""
    axis = Axis(axis)
    MixedFamilyParams(p, axis)
    ket = axis.ket
    m = (1 - p) / 2 * np.eye(2, dtype=np.complex128) + p * np.outer(ket, ket.conj())
    return DensityMatrix(m)


def embed(rho, d):
    """Zero-pad ``rho`` into a ``d``-dimensional space (support unchanged)."""
    if d < rho.dim:
        raise ValueError(f"cannot embed dimension {rho.dim} into {d}")
    m = np.zeros((d, d), dtype=np.complex128)
    m[: rho.dim, : rho.dim] = rho.matrix
    return DensityMatrix(m)


def purity(rho):
    m = rho.matrix
    return float(np.real(np.sum(m * m.T)))


def _spectrum(rho):
    lam = np.clip(rho.eigenvalues(), 0.0, None)
    return lam / lam.sum()


def von_neumann_entropy(rho):
    """Entropy in bits, with ``0 log 0 = 0``."""
    lam = _spectrum(rho)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def entropy_deficit(rho):
    """``log2(d) - S(rho)`` in bits, computed without cancellation near the maximally mixed state."""
    lam = _spectrum(rho)
    d = rho.dim
    lam = lam[lam > 0]
    # lam*log2(d*lam) with log1p keeps accuracy when d*lam ~ 1
    return float(max(np.sum(lam * np.log1p(d * lam - 1)) / math.log(2), 0.0))


def purification_budget(n, rho):
    """Number of pure qubits extractable from ``n`` copies of ``rho`` by ideal cooling.

    ``m = floor(n (1 - S(rho)))`` for qubits; for ``d > 2`` the per-copy yield
    is ``log2(d) - S(rho)``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.floor(n * entropy_deficit(rho))
