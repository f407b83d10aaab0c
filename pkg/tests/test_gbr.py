"""Tests for the generalized Bloch representation."""

import numpy as np
import pytest

from qbloch import gbr, linalg

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


class TestBasis:
    def test_qubit_basis_is_pauli(self):
        basis = gbr.gellmann_basis(2)
        assert np.abs(basis[0] - SX).max() == 0
        assert np.abs(basis[1] - SY).max() == 0
        assert np.abs(basis[2] - SZ).max() == 0

    def test_qutrit_normalization(self):
        basis = gbr.gellmann_basis(3)
        assert len(basis) == 8
        for tau in basis:
            assert np.trace(tau @ tau).real == pytest.approx(2.0, abs=1e-12)

    def test_counts(self):
        assert len(gbr.gellmann_basis(4)) == 15

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_traceless_hermitian(self, d):
        for tau in gbr.gellmann_basis(d):
            assert abs(np.trace(tau)) < 1e-12
            assert np.abs(tau - tau.conj().T).max() < 1e-12

    def test_rejects_small_dim(self):
        with pytest.raises(ValueError):
            gbr.gellmann_basis(1)


class TestToFromBloch:
    def test_maximally_mixed(self):
        assert np.abs(gbr.to_bloch(np.eye(3) / 3)).max() < 1e-15

    def test_computational_state(self):
        lam = gbr.to_bloch(np.diag([1.0, 0.0]).astype(complex))
        assert np.allclose(lam, [0.0, 0.0, 1.0])
        back = gbr.from_bloch([0.0, 0.0, 1.0])
        assert np.abs(back - np.diag([1.0, 0.0])).max() < 1e-15

    def test_zero_vector(self):
        assert np.abs(gbr.from_bloch(np.zeros(8)) - np.eye(3) / 3).max() < 1e-15

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_round_trip(self, d):
        rhos = linalg.random_density_matrices(d, 1000, seed=100 + d)
        stack = gbr.basis_stack(d)
        lams = np.einsum("iab,nba->ni", stack, rhos).real
        recon = np.eye(d) / d + 0.5 * np.einsum("ni,iab->nab", lams, stack)
        assert np.abs(recon - rhos).max() < 1e-12

    def test_affinity(self):
        rho1 = linalg.random_density_matrix(3, seed=21)
        rho2 = linalg.random_density_matrix(3, seed=22)
        for mu in (0.25, 0.5, 0.75):
            mix = mu * rho1 + (1 - mu) * rho2
            lam = mu * gbr.to_bloch(rho1) + (1 - mu) * gbr.to_bloch(rho2)
            assert np.abs(gbr.from_bloch(lam) - mix).max() < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="imaginary"):
            gbr.to_bloch(np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex))

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_pure_radius(self, d):
        for seed in range(5):
            rho = linalg.random_pure_state(d, seed=seed)
            lam = gbr.to_bloch(rho)
            assert abs(np.linalg.norm(lam) - gbr.bloch_radius(d)) < 1e-12


class TestGeometry:
    def test_radius_values(self):
        assert gbr.bloch_radius(2) == pytest.approx(1.0)
        assert gbr.bloch_radius(3) == pytest.approx(np.sqrt(4.0 / 3.0))

    def test_radius_monotone_to_sqrt2(self):
        vals = [gbr.bloch_radius(d) for d in range(2, 40)]
        assert np.all(np.diff(vals) > 0)
        assert vals[-1] < np.sqrt(2.0)
        assert gbr.bloch_radius(10**6) == pytest.approx(np.sqrt(2.0), abs=1e-5)

    def test_max_angle_values(self):
        assert gbr.max_angle(2) == pytest.approx(np.pi)
        assert gbr.max_angle(3) == pytest.approx(2 * np.pi / 3)
        assert gbr.max_angle(10**6) == pytest.approx(np.pi / 2, abs=1e-5)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_inner_product_identity(self, d):
        rhos = linalg.random_density_matrices(d, 200, seed=31 + d)
        sigmas = linalg.random_density_matrices(d, 200, seed=41 + d)
        for rho, sigma in zip(rhos, sigmas):
            lhs = np.trace(sigma @ rho).real
            rhs = 1.0 / d + 0.5 * float(gbr.to_bloch(rho) @ gbr.to_bloch(sigma))
            assert abs(lhs - rhs) < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_distance_identity(self, d):
        for seed in range(20):
            rho = linalg.random_density_matrix(d, seed=seed)
            sigma = linalg.random_density_matrix(d, seed=seed + 1000)
            lhs = linalg.hs_distance(rho, sigma)
            rhs = 0.5 * np.linalg.norm(gbr.to_bloch(rho) - gbr.to_bloch(sigma))
            assert abs(lhs - rhs) < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_angle_constraint(self, d):
        # For physical rho and pure sigma the Bloch overlap is at least -2/d.
        for seed in range(30):
            rho = linalg.random_density_matrix(d, seed=seed)
            sigma = linalg.random_pure_state(d, seed=seed + 500)
            overlap = float(gbr.to_bloch(sigma) @ gbr.to_bloch(rho))
            assert overlap >= -2.0 / d - 1e-10


class TestPhysicality:
    def test_center_is_physical(self):
        ok, witness = gbr.is_physical_bloch(np.zeros(8))
        assert ok
        assert witness == pytest.approx(1.0 / 3.0)

    def test_qutrit_antipode(self):
        rho = linalg.random_pure_state(3, seed=51)
        ok, witness = gbr.is_physical_bloch(-gbr.to_bloch(rho))
        assert not ok
        assert witness == pytest.approx(-1.0 / 3.0, abs=1e-10)

    def test_qubit_ball_is_physical(self):
        rng = np.random.default_rng(53)
        for _ in range(50):
            lam = rng.standard_normal(3)
            lam *= rng.uniform(0, 1) / np.linalg.norm(lam)
            ok, _ = gbr.is_physical_bloch(lam)
            assert ok

    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    def test_proper_subset_witness(self, d):
        rho = linalg.random_pure_state(d, seed=60 + d)
        ok, witness = gbr.is_physical_bloch(-gbr.to_bloch(rho))
        assert not ok
        assert witness < -1e-6


class TestCheckDensity:
    def test_accepts_valid(self):
        gbr.check_density(linalg.random_density_matrix(3, seed=71))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            gbr.check_density(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="negative"):
            gbr.check_density(np.diag([1.5, -0.5]).astype(complex))
