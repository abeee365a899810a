"""Controlled-SHIFT moment measurement.

The SHIFT operator on ``l`` registers maps ``|i_1, ..., i_l>`` to
``|i_l, i_1, ..., i_{l-1}>``. It is stored as a permutation of basis indices.
With the registers labelled this way, ``tr[S (r_1 x ... x r_l)]`` is the
reversed product ``tr[r_l ... r_1]``, which is the complex conjugate of
``tr[r_1 ... r_l]`` for Hermitian factors. :func:`shift_trace` uses the
inverse shift so that it returns the product in the given order. The Hadamard
test only sees the real part, which is the same for both orientations.
"""
from collections import Counter
from dataclasses import dataclass, field
import hashlib
from itertools import product
import math
import warnings

import numpy as np

from . import config, kernels, linalg
from .errors import (
    DimensionMismatchError,
    IllConditionedWarning,
    ImaginaryResidueError,
    ResourceCapExceeded,
)
from .states import DensityMatrix

DENSE_SHIFT_MAX_QUBITS = 12
IMAG_TOL = 1e-9
RESIDUAL_FLAG = 1e-4


class ShiftOperator:
    """Cyclic register shift ``S`` on ``l`` registers of dimension ``d``."""

    def __init__(self, l, d, cap=None):
        if l < 1 or d < 1:
            raise ValueError("need l >= 1 and d >= 1")
        self.l, self.d = l, d
        total = linalg.check_dim(d**l, config.register_cap() if cap is None else cap)
        digits = np.array(np.unravel_index(np.arange(total), (d,) * l))
        shifted = np.roll(digits, 1, axis=0)
        # forward[c] = index of S|c>
        self.forward = np.ravel_multi_index(tuple(shifted), (d,) * l).astype(np.int64)
        self.inverse = np.empty_like(self.forward)
        self.inverse[self.forward] = np.arange(total, dtype=np.int64)

    @property
    def dim(self):
        return self.forward.shape[0]

    def apply(self, vec):
        vec = np.asarray(vec)
        out = np.empty_like(vec)
        out[self.forward] = vec
        return out

    def power(self, k):
        perm = np.arange(self.dim, dtype=np.int64)
        for _ in range(k % self.l):
            perm = self.forward[perm]
        return perm

    def is_permutation(self):
        return np.array_equal(np.sort(self.forward), np.arange(self.dim))

    def to_dense(self):
        if self.l * math.log2(self.d) > DENSE_SHIFT_MAX_QUBITS:
            raise ResourceCapExceeded("dense SHIFT matrices are limited to 12 qubits")
        s = np.zeros((self.dim, self.dim))
        s[self.forward, np.arange(self.dim)] = 1.0
        return s

    def trace(self, mats, inverse=False):
        """``tr[S (m_1 x ... x m_l)]`` (or with ``S^-1`` when ``inverse``)."""
        mats = np.asarray(mats, dtype=np.complex128)
        if mats.shape != (self.l, self.d, self.d):
            raise DimensionMismatchError(f"expected {self.l} matrices of size {self.d}, got {mats.shape}")
        # tr[P M] = sum_r M[pi_P^-1(r), r]
        src = self.forward if inverse else self.inverse
        return kernels.permuted_product_trace(mats, src)


def _stack(states):
    mats = [s.matrix if isinstance(s, DensityMatrix) else linalg.as_matrix(s) for s in states]
    if not mats:
        raise ValueError("need at least one state")
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise DimensionMismatchError("all registers must share one dimension")
    return np.stack(mats)


def shift_trace(states, cap=None):
    """``tr[rho_1 rho_2 ... rho_l]`` evaluated as a one-sided SHIFT trace of the tensor product."""
    mats = _stack(states)
    l, d, _ = mats.shape
    return ShiftOperator(l, d, cap).trace(mats, inverse=True)


def dense_product_trace(states):
    """Reference value ``tr[rho_1 ... rho_l]`` by a chain of matrix products."""
    mats = _stack(states)
    acc = mats[0]
    for m in mats[1:]:
        acc = acc @ m
    return complex(np.trace(acc))


def inputs_hash(states):
    h = hashlib.sha256()
    for m in _stack(states):
        h.update(np.ascontiguousarray(m).tobytes())
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class CircuitEvaluation:
    l: int
    exact_expectation: complex
    shots: int
    seed: int
    sampled_estimate: float = None
    standard_error: float = None
    flagged: bool = False
    inputs_hash: str = ""

    @property
    def z_expectation(self):
        return self.exact_expectation.real

    def as_dict(self):
        d = {
            "inputs_hash": self.inputs_hash,
            "l": self.l,
            "exact": [self.exact_expectation.real, self.exact_expectation.imag],
            "shots": self.shots,
            "seed": self.seed,
        }
        if self.shots:
            d["estimate"] = self.sampled_estimate
            d["standard_error"] = self.standard_error
            d["flagged"] = self.flagged
        return d


def _sample(e, shots, seed):
    """Binomial draw of control-qubit outcomes; returns ``(estimate, stderr, flagged)``."""
    rng = np.random.default_rng(seed)
    p0 = min(max((1 + e) / 2, 0.0), 1.0)
    k0 = int(rng.binomial(shots, p0))
    estimate = 2 * k0 / shots - 1
    stderr = math.sqrt(max(1 - e * e, 0.0) / shots)
    flagged = abs(estimate - e) > 6 * stderr if stderr > 0 else estimate != e
    return estimate, stderr, bool(flagged)


def hadamard_test(states, shots=0, seed=0, cap=None, copies=1):
    """Simulate the controlled-SHIFT Hadamard test on ``states``.

    The control qubit ends in ``|0>`` with probability ``(1 + Re tr[S rho])/2``;
    ``shots`` draws from that distribution give the estimate ``2 k/shots - 1``.
    ``shots = 0`` returns the exact value only. ``seed`` may be an int or a
    sequence of ints (as accepted by ``numpy.random.default_rng``).

    With ``copies = n`` every register stands for ``rho^(x)n``. A SHIFT over
    ``n``-qubit registers is ``n`` independent SHIFTs over the qubit factors,
    so the exact value is the single-copy trace to the ``n``-th power.
    """
    if shots < 0:
        raise ValueError("shots must be >= 0")
    mats = _stack(states)
    exact = shift_trace(mats, cap)
    if copies != 1:
        exact = exact**copies
    e = exact.real
    if abs(e) > 1 + 1e-9:
        raise ArithmeticError(f"Hadamard-test expectation {e} outside [-1, 1]")
    h = inputs_hash(mats)
    if shots == 0:
        return CircuitEvaluation(mats.shape[0], exact, 0, seed, inputs_hash=h)
    estimate, stderr, flagged = _sample(e, shots, seed)
    return CircuitEvaluation(mats.shape[0], exact, shots, seed, estimate, stderr, flagged, h)


def dense_hadamard_expectation(states):
    """Control-qubit ``<Z>`` from an explicit density-matrix run of the circuit.

    Builds ``|0><0| (x) rho``, applies ``H``, controlled-``S`` and ``H``. Only
    for small registers; used to cross-check :func:`hadamard_test`.
    """
    mats = _stack(states)
    l, d, _ = mats.shape
    s = ShiftOperator(l, d)
    sm = s.to_dense()
    rho = mats[0]
    for m in mats[1:]:
        rho = np.kron(rho, m)
    dim = rho.shape[0]
    eye = np.eye(dim)
    had = np.kron(np.array([[1, 1], [1, -1]]) / math.sqrt(2), eye)
    cs = np.block([[eye, np.zeros((dim, dim))], [np.zeros((dim, dim)), sm]])
    full = np.kron(np.diag([1.0, 0.0]), rho)
    circ = had @ cs @ had
    out = circ @ full @ circ.conj().T
    z = np.kron(np.diag([1.0, -1.0]), eye)
    return float(np.real(np.trace(z @ out)))


@dataclass(frozen=True)
class MomentVector:
    """``j_l = tr[(rho_X rho_Z)^l]`` for ``l = 1..L``."""

    j: tuple
    evaluations: tuple = field(default=(), repr=False)

    @property
    def estimates(self):
        return tuple(e.sampled_estimate for e in self.evaluations)

    def as_dict(self):
        return {"j": list(self.j), "evaluations": [e.as_dict() for e in self.evaluations]}


def moments(rho_x, rho_z, L, shots=0, seed=0, copies=1, cap=None):
    """Moments ``j_l`` from Hadamard tests on ``2l`` alternating registers.

    The test for ``j_l`` is seeded with ``[seed, l]``.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    evals = []
    for l in range(1, L + 1):
        ev = hadamard_test([rho_x, rho_z] * l, shots, [seed, l], cap, copies)
        if abs(ev.exact_expectation.imag) > IMAG_TOL:
            raise ImaginaryResidueError(f"j_{l} has imaginary part {ev.exact_expectation.imag:.3e}")
        evals.append(ev)
    return MomentVector(tuple(ev.exact_expectation.real for ev in evals), tuple(evals))


def canonical_rotation(word):
    return min(word[i:] + word[:i] for i in range(len(word)))


def witness_words(l):
    """Cyclic classes of the ``2**l`` words of ``(XZ + ZX)^l`` with multiplicities."""
    counts = Counter()
    for blocks in product(("XZ", "ZX"), repeat=l):
        counts[canonical_rotation("".join(blocks))] += 1
    return dict(sorted(counts.items()))


def witness_power_traces(rho_x, rho_z, L, copies=1, cap=None):
    """``[tr[J], tr[J^2], ..., tr[J^L]]`` assembled from SHIFT traces of words.

    ``J^l`` expands into ``2**l`` ordered words in ``rho_X`` and ``rho_Z``;
    words related by a cyclic rotation have equal trace and are evaluated once.
    ``copies`` treats the inputs as ``n``-fold tensor powers (see :func:`moments`).
    """
    d = rho_x.dim**copies
    if rho_x.dim != rho_z.dim:
        raise DimensionMismatchError("rho_x and rho_z dimensions differ")
    if not 1 <= L <= d:
        raise ValueError(f"L must lie in [1, {d}]")
    letters = {"X": rho_x, "Z": rho_z}
    traces = []
    for l in range(1, L + 1):
        total = 0j
        for word, mult in witness_words(l).items():
            value = shift_trace([letters[c] for c in word], cap)
            total += mult * value**copies
        if abs(total.imag) > IMAG_TOL * max(1.0, abs(total)):
            raise ImaginaryResidueError(f"tr[J^{l}] has imaginary part {total.imag:.3e}")
        traces.append(total.real)
    return traces


def newton_elementary(power_sums):
    """Elementary symmetric polynomials ``e_0..e_d`` from power sums ``p_1..p_d``."""
    p = list(power_sums)
    e = [1.0]
    for k in range(1, len(p) + 1):
        acc = sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1))
        e.append(acc / k)
    return e


def characteristic_coefficients(power_sums):
    """Monic characteristic polynomial, highest degree first."""
    e = newton_elementary(power_sums)
    return np.array([(-1) ** k * e[k] for k in range(len(e))], dtype=float)


@dataclass(frozen=True)
class SpectrumReconstruction:
    eigenvalues: np.ndarray
    residual: float
    max_imag: float

    @property
    def ill_conditioned(self):
        return self.residual > RESIDUAL_FLAG or self.max_imag > RESIDUAL_FLAG


def reconstruct_spectrum(power_sums, d):
    """Roots of the characteristic polynomial built from ``d`` power sums.

    Roots come from the eigenvalues of the (LAPACK-balanced) companion matrix.
    ``residual`` is the largest relative mismatch between the input power sums
    and those of the recovered roots.
    """
    power_sums = np.asarray(power_sums, dtype=float)
    if power_sums.shape != (d,):
        raise ValueError(f"need exactly d={d} power sums, got {power_sums.shape[0]}")
    coeffs = characteristic_coefficients(power_sums)
    roots = np.roots(coeffs) if d > 0 else np.array([])
    if roots.shape[0] < d:
        # np.roots drops leading zeros only; trailing zero coefficients are kept as zero roots
        roots = np.concatenate([roots, np.zeros(d - roots.shape[0])])
    max_imag = float(np.max(np.abs(roots.imag))) if d else 0.0
    lam = np.sort(roots.real)
    recon = np.array([np.sum(lam**k) for k in range(1, d + 1)])
    residual = float(np.max(np.abs(recon - power_sums) / np.maximum(1.0, np.abs(power_sums)))) if d else 0.0
    return SpectrumReconstruction(lam, residual, max_imag)


def spectrum_from_powers(power_sums, d):
    """Real eigenvalues (ascending) whose power sums are ``power_sums``.

    Emits :class:`IllConditionedWarning` when the reconstruction residual or
    the imaginary parts of the roots exceed ``1e-4``.
    """
    rec = reconstruct_spectrum(power_sums, d)
    if rec.ill_conditioned:
        warnings.warn(
            f"spectrum reconstruction residual {rec.residual:.2e}, max imaginary part {rec.max_imag:.2e}",
            IllConditionedWarning,
            stacklevel=2,
        )
    return rec.eigenvalues
