"""Tests for the dense matrix kernel."""

import numpy as np
import pytest

from qbloch import linalg
from qbloch.gbr import gellmann_basis

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _trace_oracle(a, b):
    """Plain-loop tr(a b^dagger) used as an independent check."""
    d = a.shape[0]
    return sum(a[i, j] * np.conj(b[i, j]) for i in range(d) for j in range(d))


class TestHsInner:
    def test_identity(self):
        assert linalg.hs_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)

    def test_pauli_orthogonality(self):
        assert abs(linalg.hs_inner(SX, SY) - _trace_oracle(SX, SY)) < 1e-15
        assert abs(linalg.hs_inner(SX, SY)) < 1e-15

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_basis_normalization(self, d):
        basis = gellmann_basis(d)
        gram = np.array([[linalg.hs_inner(a, b) for b in basis] for a in basis])
        assert np.abs(gram - 2 * np.eye(d * d - 1)).max() < 1e-12

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            assert linalg.hs_inner(a, b) == pytest.approx(
                np.conj(linalg.hs_inner(b, a))
            )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            linalg.hs_inner(np.eye(2), np.eye(3))


class TestHsDistance:
    def test_self_distance(self):
        rho = linalg.random_density_matrix(3, seed=1)
        assert linalg.hs_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        # 2^(-1/2) * sqrt(tr (p0-p1)^2) = 2^(-1/2) * sqrt(2)
        assert linalg.hs_distance(p0, p1) == pytest.approx(1.0, abs=1e-15)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            mats = []
            for _ in range(3):
                z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
                mats.append(z + z.conj().T)
            a, b, c = mats
            assert linalg.hs_distance(a, c) <= (
                linalg.hs_distance(a, b) + linalg.hs_distance(b, c) + 1e-12
            )

    def test_rejects_non_hermitian(self):
        bad = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            linalg.hs_distance(bad, np.eye(2))


class TestTensor:
    def test_identity(self):
        assert np.array_equal(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_sz_sz(self):
        expected = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)
        assert np.abs(linalg.tensor(SZ, SZ) - expected).max() == 0.0

    def test_trace_multiplicative(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.trace(linalg.tensor(a, b)) == pytest.approx(
            np.trace(a) * np.trace(b)
        )

    def test_dimension_cap(self):
        big = np.eye(70)
        with pytest.raises(linalg.DimensionCapExceeded):
            linalg.tensor(big, big)

    def test_cap_env_override(self, monkeypatch):
        monkeypatch.setenv(linalg.DIM_CAP_ENV, "8")
        with pytest.raises(linalg.DimensionCapExceeded):
            linalg.tensor(np.eye(3), np.eye(3))
        assert linalg.tensor(np.eye(2), np.eye(4)).shape == (8, 8)


def _bell_reduced_oracle():
    """Index-by-index contraction of the Bell projector onto its first factor."""
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            out[i, j] = sum(rho[i * 2 + k, j * 2 + k] for k in range(2))
    return rho, out


class TestPartialTrace:
    def test_factorized(self):
        rho = linalg.random_density_matrix(2, seed=3)
        sigma = linalg.random_density_matrix(3, seed=4)
        big = linalg.tensor(rho, sigma)
        assert np.abs(linalg.partial_trace(big, [2, 3], 0) - rho).max() < 1e-12
        assert np.abs(linalg.partial_trace(big, [2, 3], 1) - sigma).max() < 1e-12

    @pytest.mark.parametrize("d", [2, 3])
    def test_basis_element_padded(self, d):
        # tr over the second factor of tau_j (x) I gives d * tau_j.
        tau = gellmann_basis(d)[1]
        big = linalg.tensor(tau, np.eye(d))
        assert np.abs(linalg.partial_trace(big, [d, d], 0) - d * tau).max() < 1e-12

    def test_bell_state(self):
        rho, oracle = _bell_reduced_oracle()
        got = linalg.partial_trace(rho, [2, 2], 0)
        assert np.abs(got - oracle).max() < 1e-15
        assert np.abs(got - np.eye(2) / 2).max() < 1e-15

    def test_preserves_trace(self):
        a = linalg.random_density_matrix(8, seed=6)
        red = linalg.partial_trace(a, [2, 2, 2], 1)
        assert np.trace(red) == pytest.approx(np.trace(a), abs=1e-12)

    def test_inconsistent_dims(self):
        with pytest.raises(ValueError):
            linalg.partial_trace(np.eye(6), [2, 2], 0)
        with pytest.raises(ValueError):
            linalg.partial_trace(np.eye(4), [2, 2], 2)


class TestEigHermitian:
    def test_identity(self):
        assert np.allclose(linalg.eig_hermitian(np.eye(4)), np.ones(4))

    def test_pauli_x(self):
        # roots of w^2 - 1
        assert np.allclose(linalg.eig_hermitian(SX), [-1.0, 1.0])

    def test_pure_state(self):
        rho = linalg.random_pure_state(4, seed=8)
        w = linalg.eig_hermitian(rho)
        assert np.abs(w - np.array([0, 0, 0, 1.0])).max() < 1e-12

    def test_ascending(self):
        rho = linalg.random_density_matrix(5, seed=9)
        w = linalg.eig_hermitian(rho)
        assert np.all(np.diff(w) >= 0)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            linalg.eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


class TestHaarUnitary:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_special_unitary(self, d):
        u = linalg.haar_unitary(d, seed=11)
        assert np.abs(u @ u.conj().T - np.eye(d)).max() < 1e-12
        assert abs(np.linalg.det(u) - 1.0) < 1e-12

    def test_seed_determinism(self):
        a = linalg.haar_unitary(4, seed=123)
        b = linalg.haar_unitary(4, seed=123)
        assert np.array_equal(a, b)
        c = linalg.haar_unitary(4, seed=124)
        assert not np.array_equal(a, c)

    def test_batch_matches_stream(self):
        batch = linalg.haar_unitaries(3, 5, seed=42)
        assert batch.shape == (5, 3, 3)
        gram = np.einsum("nab,ncb->nac", batch, batch.conj())
        assert np.abs(gram - np.eye(3)).max() < 1e-12

    def test_trace_second_moment(self):
        # Haar average of |tr U|^2 equals 1.
        us = linalg.haar_unitaries(3, 10_000, seed=13)
        traces = np.einsum("nii->n", us)
        assert abs(np.mean(np.abs(traces) ** 2) - 1.0) < 0.05


class TestRandomStates:
    def test_density_valid(self):
        rhos = linalg.random_density_matrices(4, 50, seed=14)
        for rho in rhos:
            assert np.abs(rho - rho.conj().T).max() < 1e-12
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
            assert np.linalg.eigvalsh(rho).min() > -1e-12

    def test_pure_normalized(self):
        kets = linalg.random_pure_states(3, 100, seed=15)
        assert np.abs(np.linalg.norm(kets, axis=1) - 1.0).max() < 1e-12
