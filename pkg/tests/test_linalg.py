import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantumness import _pykernels, kernels, linalg
from quantumness.errors import (
    DimensionMismatchError,
    NotHermitianError,
    ResourceCapExceeded,
)
from quantumness.states import KET_0, KET_PLUS, mixed_family, pure_state
from quantumness.witness import anticommutator_witness, build_witness

from conftest import random_hermitian, random_unitary


def triple_loop(a, b):
    n = a.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i, j] += a[i, k] * b[k, j]
    return out


def faddeev_leverrier(m):
    """Characteristic polynomial coefficients (highest first) without an eigensolver."""
    n = m.shape[0]
    coeffs = [1.0 + 0j]
    mk = np.zeros_like(m)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[-1] * eye
        coeffs.append(-np.trace(m @ mk) / k)
    return np.array(coeffs)


class TestMatmul:
    def test_identity(self, rng):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.array_equal(linalg.matmul(np.eye(3), a), a)

    def test_diagonal(self):
        a, b = np.diag([1, 2, 3]), np.diag([4, 5, 6])
        assert np.allclose(linalg.matmul(a, b), np.diag([4, 10, 18]))

    def test_triple_loop_oracle(self, rng):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.max(np.abs(linalg.matmul(a, b) - triple_loop(a, b))) < 1e-12

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linalg.matmul(np.eye(2), np.eye(3))


class TestTensor:
    def test_identity(self):
        assert np.array_equal(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_trace_multiplicative(self, rng):
        a, b = random_hermitian(rng, 2), random_hermitian(rng, 3)
        assert np.isclose(np.trace(linalg.tensor(a, b)), np.trace(a) * np.trace(b))

    def test_mixed_product(self, rng):
        a, b, c, d = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4))
        lhs = linalg.tensor(a, b) @ linalg.tensor(c, d)
        rhs = linalg.tensor(a @ c, b @ d)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_associative(self, rng):
        a, b, c = (random_hermitian(rng, 2) for _ in range(3))
        lhs = linalg.tensor(linalg.tensor(a, b), c)
        rhs = linalg.tensor(a, linalg.tensor(b, c))
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_cap(self):
        with pytest.raises(ResourceCapExceeded):
            linalg.tensor_power(np.eye(2), 15)
        with pytest.raises(ResourceCapExceeded):
            linalg.tensor(np.eye(4), np.eye(4), cap=8)

    def test_cap_env(self, monkeypatch):
        monkeypatch.setenv("QUANTUMNESS_DIM_CAP", "4")
        with pytest.raises(ResourceCapExceeded):
            linalg.tensor(np.eye(2), np.eye(4))


class TestEigHermitian:
    def test_diagonal(self):
        assert np.allclose(linalg.eig_hermitian(np.diag([1.0, 3.0, 2.0])), [1, 2, 3])

    def test_plus_zero_witness(self):
        # eigenvalues are (1 -+ sqrt 2)/2, see the witness tests
        j = anticommutator_witness(pure_state(KET_PLUS), pure_state(KET_0)).dense
        assert np.allclose(linalg.eig_hermitian(j), [(1 - np.sqrt(2)) / 2, (1 + np.sqrt(2)) / 2], atol=1e-12)
        big = np.zeros((4, 4), dtype=complex)
        big[:2, :2] = j
        vals = linalg.eig_hermitian(big)
        assert np.allclose(vals, [(1 - np.sqrt(2)) / 2, 0, 0, (1 + np.sqrt(2)) / 2], atol=1e-12)

    def test_companion_root_oracle(self, rng):
        m = random_hermitian(rng, 6)
        roots = np.sort(np.roots(faddeev_leverrier(m)).real)
        assert np.max(np.abs(linalg.eig_hermitian(m) - roots)) < 1e-8

    def test_reconstruction(self, rng):
        m = random_hermitian(rng, 7)
        vals, vecs = linalg.eig_hermitian(m, vectors=True)
        recon = vecs @ np.diag(vals) @ vecs.conj().T
        assert np.max(np.abs(recon - m)) <= 1e-8 * np.max(np.abs(m))
        assert np.all(np.diff(vals) >= 0)

    @pytest.mark.parametrize("d", [2, 5, 16])
    def test_sum_equals_trace(self, rng, d):
        m = random_hermitian(rng, d)
        assert abs(np.sum(linalg.eig_hermitian(m)) - np.trace(m).real) <= 1e-9 * d

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            linalg.eig_hermitian(np.array([[0, 1], [0, 0]]))


class TestMinEigMatfree:
    def test_identity(self):
        assert abs(linalg.min_eig_matfree(lambda v: v.copy(), 8) - 1.0) < 1e-12

    def test_dense_j2(self):
        w = build_witness("tensor-power", 2, 0.9)
        assert abs(linalg.min_eig_matfree(w.matvec, w.dim) - linalg.min_eigenvalue(w.dense)) < 1e-8

    def test_critical_plain(self):
        w = build_witness("plain", 1, 1 / np.sqrt(2))
        assert abs(linalg.min_eig_matfree(w.matvec, w.dim)) < 1e-8

    @pytest.mark.parametrize("d", [3, 4, 8, 17, 32, 64])
    def test_random_hermitian(self, rng, d):
        m = random_hermitian(rng, d)
        assert abs(linalg.min_eig_matfree(lambda v: m @ v, d) - np.linalg.eigvalsh(m)[0]) < 1e-8

    def test_non_hermitian_probe(self, rng):
        m = rng.normal(size=(6, 6))
        with pytest.raises(NotHermitianError):
            linalg.min_eig_matfree(lambda v: m @ v, 6)


class TestIsPsd:
    def test_identity(self):
        assert linalg.is_psd(np.eye(3))

    def test_negative_entry(self):
        assert not linalg.is_psd(np.diag([1.0, -1e-3]), tol=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    def test_codiagonal_witness_psd(self, d, seed):
        rng = np.random.default_rng(seed)
        u = random_unitary(rng, d)
        a, b = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d))
        rx, rz = u @ np.diag(a) @ u.conj().T, u @ np.diag(b) @ u.conj().T
        assert linalg.is_psd(linalg.anticommutator(rx, rz))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_anticommutator_hermitian(d, seed):
    rng = np.random.default_rng(seed)
    a, b = random_hermitian(rng, d), random_hermitian(rng, d)
    j = linalg.anticommutator(a, b)
    assert np.max(np.abs(j - j.conj().T)) <= 1e-12


class TestTensorFactored:
    def test_uniform_matches_dense(self, rng):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        op = linalg.TensorFactoredOperator.power(g, 5)
        v = rng.normal(size=32) + 1j * rng.normal(size=32)
        assert np.allclose(op.matvec(v), op.to_dense() @ v, atol=1e-12)

    def test_mixed_factors(self, rng):
        fs = (random_hermitian(rng, 2), random_hermitian(rng, 3), random_hermitian(rng, 2))
        op = linalg.TensorFactoredOperator(fs)
        v = rng.normal(size=12) + 0j
        assert op.dim == 12 and not op.uniform_qubit
        assert np.allclose(op.matvec(v), op.to_dense() @ v, atol=1e-12)


class TestKernels:
    def test_gate_all_fallback_parity(self, rng):
        v = rng.normal(size=256) + 1j * rng.normal(size=256)
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        ref = linalg.TensorFactoredOperator.power(g, 8).to_dense() @ v
        assert np.allclose(_pykernels.apply_gate_all(v, g), ref, atol=1e-12)
        assert np.allclose(kernels.apply_gate_all(v, g), ref, atol=1e-12)

    def test_product_trace_fallback_parity(self, rng):
        mats = rng.normal(size=(3, 2, 2)) + 1j * rng.normal(size=(3, 2, 2))
        src = rng.permutation(8).astype(np.int64)
        assert np.isclose(_pykernels.permuted_product_trace(mats, src), kernels.permuted_product_trace(mats, src))

    def test_compiled_matches_fallback(self, rng):
        ck = pytest.importorskip("quantumness._ckernels")
        v = rng.normal(size=1024) + 1j * rng.normal(size=1024)
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert np.allclose(ck.apply_gate_all(v, g), _pykernels.apply_gate_all(v, g), atol=1e-12)
        mats = rng.normal(size=(4, 3, 3)) + 1j * rng.normal(size=(4, 3, 3))
        src = rng.permutation(81).astype(np.int64)
        assert np.isclose(ck.permuted_product_trace(mats, src), _pykernels.permuted_product_trace(mats, src))

    def test_vector_length_one(self):
        out = _pykernels.apply_gate_all(np.array([2.0 + 0j]), np.eye(2))
        assert np.allclose(out, [2.0])


def test_mixed_family_witness_hermitian():
    w = anticommutator_witness(mixed_family(0.3, "x"), mixed_family(0.8, "z"))
    assert linalg.hermiticity_error(w.dense) <= 1e-12
