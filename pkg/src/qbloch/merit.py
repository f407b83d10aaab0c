"""Cloning figures of merit.

The single-state merit of a map is one minus the squared Bloch-metric
distance between input and output; it splits exactly into half the
output's idempotency deficit plus the pure-state fidelity.  Worst-case
merit over pure inputs is estimated by Haar sampling plus local
refinement and is therefore an upper bound on the true minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import gbr
from .channels import Channel, apply, apply_batch
from .linalg import DEFAULT_SEED, hs_distance, hs_inner, random_pure_states

# A state counts as pure when its idempotency deficit is below this.
PURITY_ATOL = 1e-10

DEFAULT_MIN_SAMPLES = 2000
DEFAULT_REFINE_ITERS = 50


def sampling_tolerance(n_samples: int) -> float:
    """Empirical tolerance 3/sqrt(n) for sampled worst-case inequalities."""
    return 3.0 / np.sqrt(n_samples)


@dataclass(frozen=True)
class MeritReport:
    """Merit value with its exact decomposition.

    ``f1 = delta/2 + pure_fidelity`` whenever produced by ``f1``.  For the
    sampled worst-case variants ``argmin_state`` carries the Bloch vector
    of the worst pure input found and the result is an upper bound on the
    true minimum at the recorded ``sampling_tol``.
    """

    f1: float
    delta: float
    pure_fidelity: float
    argmin_state: np.ndarray | None
    samples_used: int
    sampling_tol: float | None = None


def idempotency_deficit(rho: np.ndarray) -> float:
    """Linear entropy 1 - tr(rho^2); zero exactly on pure states."""
    rho = np.asarray(rho, dtype=complex)
    return float(1.0 - np.einsum("ab,ba->", rho, rho).real)


def _require_pure(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    deficit = idempotency_deficit(rho)
    if deficit > PURITY_ATOL:
        raise ValueError(
            f"merit functionals are defined over pure inputs; "
            f"idempotency deficit {deficit:.3e} exceeds {PURITY_ATOL}"
        )
    return rho


def _evaluate(target, rho: np.ndarray) -> np.ndarray:
    if isinstance(target, Channel):
        return apply(target, rho)
    if callable(target):
        return target(rho)
    raise TypeError(f"cannot evaluate {type(target).__name__} on a state")


def pure_fidelity(target, rho: np.ndarray) -> float:
    """Overlap tr(T(rho) rho) for a pure input."""
    rho = _require_pure(rho)
    return hs_inner(_evaluate(target, rho), rho).real


def _report_from_output(rho: np.ndarray, out: np.ndarray) -> MeritReport:
    return MeritReport(
        f1=1.0 - hs_distance(rho, out) ** 2,
        delta=idempotency_deficit(out),
        pure_fidelity=hs_inner(out, rho).real,
        argmin_state=None,
        samples_used=0,
    )


def f1(target, rho: np.ndarray) -> MeritReport:
    """Merit 1 - d(rho, T(rho))^2 of a map at a pure state."""
    rho = _require_pure(rho)
    return _report_from_output(rho, _evaluate(target, rho))


def _f1_values_batch(chan: Channel, rhos: np.ndarray) -> np.ndarray:
    outs = apply_batch(chan, rhos)
    diff = rhos - outs
    return 1.0 - 0.5 * np.einsum("nab,nab->n", diff, diff.conj()).real


def _f1_value(target, rho: np.ndarray) -> float:
    out = _evaluate(target, rho)
    diff = rho - out
    return float(1.0 - 0.5 * np.einsum("ab,ab->", diff, diff.conj()).real)


def _refine_pure(target, d: int, psi0: np.ndarray, maxiter: int):
    """Derivative-free descent over the real sphere chart of pure states."""

    def objective(x: np.ndarray) -> float:
        vec = x[:d] + 1j * x[d:]
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            return 2.0
        vec = vec / norm
        return _f1_value(target, np.outer(vec, vec.conj()))

    x0 = np.concatenate([psi0.real, psi0.imag])
    res = optimize.minimize(
        objective, x0, method="Nelder-Mead", options={"maxiter": maxiter}
    )
    vec = res.x[:d] + 1j * res.x[d:]
    vec = vec / np.linalg.norm(vec)
    return float(res.fun), vec


def min_f1(
    target,
    n_samples: int = DEFAULT_MIN_SAMPLES,
    seed=DEFAULT_SEED,
    refine_iters: int = DEFAULT_REFINE_ITERS,
    d: int | None = None,
) -> MeritReport:
    """Estimated worst-case merit over pure inputs.

    Haar-samples pure states, then refines the worst one with a local
    derivative-free search.  The result is an upper bound on the true
    minimum; ``sampling_tol`` records the tolerance for inequality tests.
    """
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if isinstance(target, Channel):
        if target.d_in != target.d_out:
            raise ValueError("worst-case merit is defined for square channels")
        d = target.d_in
    elif d is None:
        raise TypeError("a bare state map needs an explicit dimension d")

    kets = random_pure_states(d, n_samples, seed)
    rhos = np.einsum("na,nb->nab", kets, kets.conj())
    if isinstance(target, Channel):
        vals = _f1_values_batch(target, rhos)
    else:
        vals = np.array([_f1_value(target, r) for r in rhos])
    worst = int(np.argmin(vals))
    best_val, best_psi = float(vals[worst]), kets[worst]
    if refine_iters > 0:
        refined_val, refined_psi = _refine_pure(target, d, kets[worst], refine_iters)
        if refined_val < best_val:
            best_val, best_psi = refined_val, refined_psi
    rho_min = np.outer(best_psi, best_psi.conj())
    out = _evaluate(target, rho_min)
    return MeritReport(
        f1=best_val,
        delta=idempotency_deficit(out),
        pure_fidelity=hs_inner(out, rho_min).real,
        argmin_state=gbr.to_bloch(rho_min),
        samples_used=n_samples,
        sampling_tol=sampling_tolerance(n_samples),
    )


def f1_mn(cloner, rho: np.ndarray) -> MeritReport:
    """Worst clone merit: minimum over output slots of the reduced merit."""
    from .cloners import reduced_map  # local import keeps module layering acyclic

    rho = _require_pure(rho)
    best: MeritReport | None = None
    for k in range(cloner.m):
        rep = _report_from_output(rho, reduced_map(cloner, k, rho))
        if best is None or rep.f1 < best.f1:
            best = rep
    return best


def min_f1_mn(cloner, n_samples: int = 500, seed=DEFAULT_SEED) -> MeritReport:
    """Sampled worst-case of the worst-clone merit over pure inputs."""
    kets = random_pure_states(cloner.d, n_samples, seed)
    best: MeritReport | None = None
    best_rho = None
    for psi in kets:
        rho = np.outer(psi, psi.conj())
        rep = f1_mn(cloner, rho)
        if best is None or rep.f1 < best.f1:
            best, best_rho = rep, rho
    return MeritReport(
        f1=best.f1,
        delta=best.delta,
        pure_fidelity=best.pure_fidelity,
        argmin_state=gbr.to_bloch(best_rho),
        samples_used=n_samples,
        sampling_tol=sampling_tolerance(n_samples),
    )
