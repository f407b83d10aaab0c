"""Tolerance-checked verification suites.

Each suite exercises one structural claim of the covariant-cloning
theory end to end and returns a machine-readable report: suite name,
seed, library version, and one record per check with the measured
value, its threshold, and pass/fail status.  All sampling is seeded, so
reports are reproducible apart from the per-check runtimes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .channels import adjoint_rotations, affine_rep, apply, random_channel
from .cloners import (
    Cloner,
    optimal_qubit_12,
    reduced_map,
    shrink_factor,
    symmetric_input,
    werner_cloner,
)
from .gbr import basis_stack, bloch_radius, from_bloch, to_bloch
from .linalg import (
    DEFAULT_SEED,
    eig_hermitian,
    haar_unitaries,
    partial_trace,
    random_density_matrices,
    random_pure_states,
)
from .symmetry import (
    _twirl_affine,
    backmap_operators,
    covariance_defect,
    covariance_residual,
)
from .cloners import coproduct, symmetry_defect

SUITE_NAMES = (
    "prop1",
    "prop3",
    "prop7",
    "prop8",
    "theorem1",
    "corollary1",
    "qubit12",
)


@dataclass
class _Suite:
    name: str
    seed: int
    checks: list = field(default_factory=list)
    _t_last: float = field(default_factory=time.perf_counter)

    def check(self, name: str, measured: float, threshold: float, ok: bool | None = None):
        now = time.perf_counter()
        if ok is None:
            ok = measured <= threshold
        self.checks.append(
            {
                "name": name,
                "status": "pass" if ok else "fail",
                "measured": float(measured),
                "threshold": float(threshold),
                "runtime_ms": round((now - self._t_last) * 1000.0, 3),
            }
        )
        self._t_last = now

    def report(self) -> dict:
        ok = all(c["status"] == "pass" for c in self.checks)
        return {
            "suite": self.name,
            "seed": self.seed,
            "version": __version__,
            "status": "pass" if ok else "fail",
            "checks": self.checks,
        }


def _bloch_batch(rhos: np.ndarray) -> np.ndarray:
    d = rhos.shape[-1]
    return np.einsum("iab,nba->ni", basis_stack(d), rhos).real


def suite_prop1(seed: int = DEFAULT_SEED) -> dict:
    """Bloch-map identities, pure-state radius, and the unphysical antipode."""
    s = _Suite("prop1", seed)
    for d in (2, 3, 4, 5):
        n = 1000
        rhos = random_density_matrices(d, n, seed + 11 * d)
        sigmas = random_density_matrices(d, n, seed + 11 * d + 5)
        lam_r = _bloch_batch(rhos)
        lam_s = _bloch_batch(sigmas)
        overlap = np.einsum("nab,nba->n", sigmas, rhos).real
        pred = 1.0 / d + 0.5 * np.einsum("ni,ni->n", lam_r, lam_s)
        s.check(f"prop1.inner_identity.d{d}", np.abs(overlap - pred).max(), 1e-10)
        diff = rhos - sigmas
        dist = np.sqrt(0.5 * np.einsum("nab,nab->n", diff, diff.conj()).real)
        pred = 0.5 * np.linalg.norm(lam_r - lam_s, axis=1)
        s.check(f"prop1.distance_identity.d{d}", np.abs(dist - pred).max(), 1e-10)

        kets = random_pure_states(d, 100, seed + 17 * d)
        pures = np.einsum("na,nb->nab", kets, kets.conj())
        norms = np.linalg.norm(_bloch_batch(pures), axis=1)
        s.check(f"prop1.pure_radius.d{d}", np.abs(norms - bloch_radius(d)).max(), 1e-12)

    for d in (3, 4, 5, 6):
        ket = random_pure_states(d, 1, seed + 23 * d)[0]
        lam = to_bloch(np.outer(ket, ket.conj()))
        witness = float(np.linalg.eigvalsh(from_bloch(-lam)).min())
        s.check(f"prop1.antipode_witness.d{d}", witness, -1e-6, ok=witness < -1e-6)
        if d == 3:
            s.check("prop1.antipode_witness_value.d3", abs(witness + 1.0 / 3.0), 1e-10)
    return s.report()


def suite_prop3(seed: int = DEFAULT_SEED) -> dict:
    """The adjoint action of SU(d) lands in SO(D) and respects products."""
    s = _Suite("prop3", seed)
    for d in (2, 3, 4):
        big = d * d - 1
        us = haar_unitaries(d, 100, seed + 7 * d)
        vs = haar_unitaries(d, 100, seed + 7 * d + 3)
        phis = adjoint_rotations(us)
        psis = adjoint_rotations(vs)
        gram = np.einsum("nji,njk->nik", phis, phis)
        s.check(
            f"prop3.orthogonality.d{d}",
            np.abs(gram - np.eye(big)).max(),
            1e-10,
        )
        s.check(
            f"prop3.determinant.d{d}", np.abs(np.linalg.det(phis) - 1.0).max(), 1e-10
        )
        prod_rot = adjoint_rotations(np.einsum("nab,nbc->nac", us, vs))
        rot_prod = np.einsum("nij,njk->nik", phis, psis)
        s.check(
            f"prop3.homomorphism.d{d}", np.abs(prod_rot - rot_prod).max(), 1e-10
        )
    return s.report()


def suite_prop7(seed: int = DEFAULT_SEED) -> dict:
    """Haar twirling drives every channel to the isotropic form xi * I."""
    s = _Suite("prop7", seed)
    n_samples = 20_000
    threshold = 5.0 / np.sqrt(n_samples)
    for d in (2, 3):
        big = d * d - 1
        phis = adjoint_rotations(haar_unitaries(d, n_samples, seed + 101 * d))
        worst_m = 0.0
        worst_c = 0.0
        for i in range(20):
            chan = random_channel(d, d, d * d, seed + 1000 * d + i)
            aff = affine_rep(chan)
            m_avg, c_avg = _twirl_affine(aff, phis)
            xi = float(np.trace(m_avg)) / big
            worst_m = max(worst_m, float(np.abs(m_avg - xi * np.eye(big)).max()))
            worst_c = max(worst_c, float(np.linalg.norm(c_avg)))
        s.check(f"prop7.isotropic_matrix.d{d}", worst_m, threshold)
        s.check(f"prop7.zero_offset.d{d}", worst_c, threshold)

    # Monte Carlo convergence: the deviation from the isotropic form decays
    # as n^(-1/2); fit the log-log slope over three decades.
    ns = (100, 1000, 10_000)
    reps = 8
    mean_devs = []
    for j, n in enumerate(ns):
        devs = []
        for r in range(reps):
            chan = random_channel(2, 2, 4, seed + 77 * (j + 1) + r)
            aff = affine_rep(chan)
            phis = adjoint_rotations(haar_unitaries(2, n, seed + 777 * (j + 1) + r))
            m_avg, c_avg = _twirl_affine(aff, phis)
            xi = float(np.trace(m_avg)) / 3.0
            devs.append(
                max(
                    float(np.abs(m_avg - xi * np.eye(3)).max()),
                    float(np.linalg.norm(c_avg)),
                )
            )
        mean_devs.append(np.mean(devs))
    slope = float(np.polyfit(np.log10(ns), np.log10(mean_devs), 1)[0])
    s.check("prop7.defect_slope", abs(slope + 0.5), 0.15)
    return s.report()


def suite_prop8(seed: int = DEFAULT_SEED) -> dict:
    """Reduced clones: slot symmetry, covariance, and polynomial degree."""
    s = _Suite("prop8", seed)
    w = werner_cloner(2, 1, 2)
    kets = random_pure_states(2, 20, seed + 1)
    worst = 0.0
    for psi in kets:
        rho = np.outer(psi, psi.conj())
        clones = [reduced_map(w, k, rho) for k in range(w.m)]
        for c in clones[1:]:
            worst = max(worst, float(np.abs(c - clones[0]).max()))
    s.check("prop8.clones_identical", worst, 1e-10)

    us = haar_unitaries(2, 20, seed + 2)
    worst = 0.0
    for u, psi in zip(us, kets):
        rho = np.outer(psi, psi.conj())
        lhs = reduced_map(w, 0, u @ rho @ u.conj().T)
        rhs = u @ reduced_map(w, 0, rho) @ u.conj().T
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    s.check("prop8.reduced_covariance", worst, 1e-10)

    # Any 1 -> 2 cloner acts affinely on the Bloch ball.
    raw = Cloner(2, 1, 2, random_channel(2, 4, 6, seed + 3))
    rhos = random_density_matrices(2, 30, seed + 4)
    lam_in = _bloch_batch(rhos)
    lam_out = np.stack([to_bloch(reduced_map(raw, 0, r)) for r in rhos])
    design = np.hstack([lam_in, np.ones((len(rhos), 1))])
    coef, *_ = np.linalg.lstsq(design, lam_out, rcond=None)
    s.check("prop8.affine_exact_n1", np.abs(design @ coef - lam_out).max(), 1e-10)

    # A 2 -> 3 cloner induces exactly quadratic component functions.
    w23 = werner_cloner(2, 2, 3)
    rhos = random_density_matrices(2, 60, seed + 5)
    lam_in = _bloch_batch(rhos)
    comps = []
    for r in rhos:
        out = apply(w23.channel, symmetric_input(r, 2))
        comps.append(to_bloch(partial_trace(out, [2, 2, 2], keep=0)))
    comps = np.stack(comps)
    feats = [np.ones(len(rhos))]
    for i in range(3):
        feats.append(lam_in[:, i])
    for i in range(3):
        for j in range(i, 3):
            feats.append(lam_in[:, i] * lam_in[:, j])
    design = np.stack(feats, axis=1)
    coef, *_ = np.linalg.lstsq(design, comps, rcond=None)
    s.check("prop8.quadratic_exact_n2", np.abs(design @ coef - comps).max(), 1e-8)
    return s.report()


def suite_theorem1(seed: int = DEFAULT_SEED) -> dict:
    """Covariant symmetric cloners contract Bloch vectors by a scalar.

    Checks the least-squares contraction, the coefficient-table route, the
    back-mapped operators, and the symmetric-sector transformation
    residuals for the reference cloners; the (2,1,2) case additionally
    pins its certificates and reduced-clone fidelity.
    """
    s = _Suite("theorem1", seed)
    for d, n, m in ((2, 1, 2), (2, 1, 3), (3, 1, 2)):
        tag = f"d{d}n{n}m{m}"
        w = werner_cloner(d, n, m)
        oracle = n * (m + d) / (m * (n + d))
        res = shrink_factor(w, n_samples=100, seed=seed + 13 * d + m)
        s.check(f"theorem1.shrink_law.{tag}", res.fit_residual, 1e-9)
        s.check(f"theorem1.shrink_fit.{tag}", abs(res.xi - oracle), 1e-9)
        s.check(
            f"theorem1.shrink_formula.{tag}",
            abs(res.factor_formula_xi - oracle),
            1e-9,
        )
        fs = backmap_operators(w)
        worst = max(
            float(np.abs(f - oracle * coproduct(i + 1, d, n)).max())
            for i, f in enumerate(fs)
        )
        s.check(f"theorem1.backmap_form.{tag}", worst, 1e-8)
        resid = covariance_residual(w, n_samples=20, seed=seed + 29 * d + m)
        s.check(f"theorem1.symmetric_residual.{tag}", resid.max_residual, 1e-8)

    w = werner_cloner(2, 1, 2)
    s.check(
        "theorem1.symmetry_defect.d2n1m2",
        symmetry_defect(w, seed=seed + 41),
        1e-10,
    )
    s.check(
        "theorem1.covariance_defect.d2n1m2",
        covariance_defect(w, n_samples=50, seed=seed + 43),
        1e-8,
    )
    kets = random_pure_states(2, 20, seed + 47)
    worst = 0.0
    for psi in kets:
        rho = np.outer(psi, psi.conj())
        fid = float(np.trace(reduced_map(w, 0, rho) @ rho).real)
        worst = max(worst, abs(fid - 5.0 / 6.0))
    s.check("theorem1.reduced_fidelity.d2n1m2", worst, 1e-9)
    return s.report()


def suite_corollary1(seed: int = DEFAULT_SEED) -> dict:
    """Concatenated contraction factors multiply."""
    from .cloners import compose

    s = _Suite("corollary1", seed)
    w12 = werner_cloner(2, 1, 2)
    w24 = werner_cloner(2, 2, 4)
    chained = compose(w24, w12)
    res = shrink_factor(chained, n_samples=60, seed=seed + 3)
    s.check("corollary1.product_value", abs(res.xi - 0.5), 1e-8)
    xi_12 = shrink_factor(w12, n_samples=60, seed=seed + 5).xi
    xi_24 = shrink_factor(w24, n_samples=60, seed=seed + 7).xi
    s.check("corollary1.factorization", abs(res.xi - xi_12 * xi_24), 1e-8)
    direct = shrink_factor(werner_cloner(2, 1, 4), n_samples=60, seed=seed + 11).xi
    s.check("corollary1.matches_direct", abs(res.xi - direct), 1e-8)
    return s.report()


def suite_qubit12(seed: int = DEFAULT_SEED) -> dict:
    """The qubit 1 -> 2 optimum: parameters, spectrum, and cross-validation."""
    s = _Suite("qubit12", seed)
    opt = optimal_qubit_12()
    s.check("qubit12.t_value", abs(opt.t - 1.0 / 3.0), 1e-9)
    s.check("qubit12.xi_value", abs(opt.xi - 2.0 / 3.0), 1e-9)

    kets = random_pure_states(2, 20, seed + 1)
    formula = np.array(opt.spectrum())
    worst_formula = 0.0
    worst_full = 0.0
    worst_cross = 0.0
    for psi in kets:
        rho = np.outer(psi, psi.conj())
        out = opt.output_state(to_bloch(rho))
        eigs = eig_hermitian(out)
        # Each closed-form eigenvalue must appear in the assembled spectrum.
        worst_formula = max(
            worst_formula, float(max(np.abs(eigs - v).min() for v in formula))
        )
        full = np.sort(np.append(formula, 0.25 * (1.0 + opt.t)))
        worst_full = max(worst_full, float(np.abs(eigs - full).max()))
        worst_cross = max(
            worst_cross, float(np.abs(out - apply(opt.cloner.channel, rho)).max())
        )
    s.check("qubit12.spectrum_formula", worst_formula, 1e-10)
    s.check("qubit12.spectrum_full", worst_full, 1e-10)
    s.check("qubit12.matches_reference_cloner", worst_cross, 1e-10)
    return s.report()


_SUITES = {
    "prop1": suite_prop1,
    "prop3": suite_prop3,
    "prop7": suite_prop7,
    "prop8": suite_prop8,
    "theorem1": suite_theorem1,
    "corollary1": suite_corollary1,
    "qubit12": suite_qubit12,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> dict:
    """Run one named suite, or all of them with a combined report."""
    if name == "all":
        checks = []
        ok = True
        for sub in SUITE_NAMES:
            rep = _SUITES[sub](seed)
            checks.extend(rep["checks"])
            ok = ok and rep["status"] == "pass"
        return {
            "suite": "all",
            "seed": seed,
            "version": __version__,
            "status": "pass" if ok else "fail",
            "checks": checks,
        }
    if name not in _SUITES:
        raise ValueError(
            f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or 'all'"
        )
    return _SUITES[name](seed)


def strip_runtimes(report: dict) -> dict:
    """Copy of a report without the per-check runtimes (the only
    nondeterministic fields)."""
    out = dict(report)
    out["checks"] = [
        {k: v for k, v in c.items() if k != "runtime_ms"} for c in report["checks"]
    ]
    return out
