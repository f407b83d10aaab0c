"""Group-averaging machinery.

Haar twirling projects a channel onto its covariant (isotropic
contraction) part, symmetric-group averaging makes a cloner's output
slots interchangeable, and the covariance diagnostics measure how far a
map sits from the fixed-point set of simultaneous rotation.  The
back-mapped operators pull each reduced Bloch component of a cloner
back to its input space, where covariance forces them into the adjoint
orbit of the basis.

Twirling averages are associative and order independent up to
floating-point reassociation; tests must compare them with tolerances,
never bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from . import gbr
from .channels import (
    AffineRep,
    Channel,
    ChoiMatrix,
    adjoint_rotations,
    affine_rep,
    apply,
    choi_to_kraus,
    kraus_to_choi,
)
from .cloners import (
    SYMMETRIZE_MAX_M,
    Cloner,
    cloner_conjugate,
    coproduct,
    permutation_operator,
    symmetric_projector,
)
from .linalg import (
    DEFAULT_SEED,
    _rng,
    haar_unitaries,
    random_density_matrices,
    random_pure_states,
    tensor,
)


def monte_carlo_tolerance(n_samples: int) -> float:
    """Pass threshold 5/sqrt(n) for Haar-averaged quantities."""
    return 5.0 / np.sqrt(n_samples)


@dataclass(frozen=True)
class TwirlReport:
    """Monte Carlo Haar average of a channel in Bloch coordinates.

    ``xi_fit`` is the mean diagonal of the averaged matrix; the deviation
    norms measure the distance from the exact isotropic form xi * I that
    the average converges to.
    """

    averaged: AffineRep
    xi_fit: float
    offdiag_norm: float
    c_norm: float
    n_samples: int
    seed: int


def _twirl_affine(aff: AffineRep, phis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m_avg = np.einsum("nji,jk,nkl->il", phis, aff.matrix, phis) / phis.shape[0]
    c_avg = np.einsum("nji,j->i", phis, aff.offset) / phis.shape[0]
    return m_avg, c_avg


def twirl_su(target, n_samples: int = 10_000, seed=DEFAULT_SEED) -> TwirlReport:
    """Average the conjugated channel over Haar samples at the Bloch level.

    Accepts a square Channel or an AffineRep directly.  The exact average
    is xi * I with xi = tr(M)/D and zero offset; the report carries the
    fitted xi and the residual deviations.
    """
    if n_samples < 100:
        raise ValueError("need at least 100 samples for a meaningful average")
    aff = affine_rep(target) if isinstance(target, Channel) else target
    if aff.d_in != aff.d_out:
        raise ValueError("twirling requires a square map")
    d = aff.d_in
    phis = adjoint_rotations(haar_unitaries(d, n_samples, seed))
    m_avg, c_avg = _twirl_affine(aff, phis)
    big = d * d - 1
    xi = float(np.trace(m_avg)) / big
    return TwirlReport(
        averaged=AffineRep(matrix=m_avg, offset=c_avg, d_in=d, d_out=d),
        xi_fit=xi,
        offdiag_norm=float(np.abs(m_avg - xi * np.eye(big)).max()),
        c_norm=float(np.linalg.norm(c_avg)),
        n_samples=n_samples,
        seed=seed if isinstance(seed, int) else -1,
    )


def twirl_su_channel(chan: Channel, n_samples: int = 200, seed=DEFAULT_SEED) -> Channel:
    """Kraus-level Monte Carlo twirl via Choi averaging.

    Averaging completely positive maps stays completely positive, so the
    re-extracted Kraus set passes the usual certificates.
    """
    if chan.d_in != chan.d_out:
        raise ValueError("twirling requires a square channel")
    d = chan.d_in
    us = haar_unitaries(d, n_samples, seed)
    j = kraus_to_choi(chan).matrix
    acc = np.zeros_like(j)
    for u in us:
        w = np.kron(u.conj().T, u.T)
        acc += w @ j @ w.conj().T
    acc /= n_samples
    return choi_to_kraus(ChoiMatrix(matrix=acc, d_in=d, d_out=d))


def twirl_cloner(cloner: Cloner, n_samples: int = 200, seed=DEFAULT_SEED) -> Cloner:
    """Monte Carlo twirl of a cloner under simultaneous input/output rotation."""
    from functools import reduce

    us = haar_unitaries(cloner.d, n_samples, seed)
    j = kraus_to_choi(cloner.channel).matrix
    acc = np.zeros_like(j)
    for u in us:
        u_in = reduce(tensor, [u] * cloner.n)
        u_out = reduce(tensor, [u] * cloner.m)
        w = np.kron(u_out.conj().T, u_in.T)
        acc += w @ j @ w.conj().T
    acc /= n_samples
    chan = choi_to_kraus(
        ChoiMatrix(matrix=acc, d_in=cloner.channel.d_in, d_out=cloner.channel.d_out)
    )
    return Cloner(cloner.d, cloner.n, cloner.m, chan)


def symmetrize_sm(cloner: Cloner) -> Cloner:
    """Average the output of a cloner over all permutations of its slots."""
    if cloner.m > SYMMETRIZE_MAX_M:
        raise ValueError(
            f"m={cloner.m} exceeds the symmetric-group cap {SYMMETRIZE_MAX_M}"
        )
    norm = 1.0 / np.sqrt(factorial(cloner.m))
    kraus = []
    for perm in permutations(range(cloner.m)):
        u = permutation_operator(perm, cloner.d)
        for k in cloner.channel.kraus:
            kraus.append(norm * (u @ k))
    chan = Channel.from_kraus(kraus)
    if len(kraus) > chan.d_in * chan.d_out:
        chan = choi_to_kraus(kraus_to_choi(chan))
    return Cloner(cloner.d, cloner.n, cloner.m, chan)


def _as_state_map(target, d: int | None):
    """Normalize Channel / Cloner / callable into (apply_fn, d, n, m)."""
    if isinstance(target, Cloner):
        chan = target.channel
        return (lambda rho: apply(chan, rho)), target.d, target.n, target.m
    if isinstance(target, Channel):
        if target.d_in != target.d_out:
            raise ValueError("covariance is defined for square channels")
        return (lambda rho: apply(target, rho)), target.d_in, 1, 1
    if callable(target):
        if d is None:
            raise ValueError("a bare state map needs an explicit dimension d")
        return target, d, 1, 1
    raise TypeError(f"cannot interpret {type(target).__name__} as a state map")


def covariance_defect(
    target, n_samples: int = 50, seed=DEFAULT_SEED, d: int | None = None
) -> float:
    """Worst-case change of the map under simultaneous rotation.

    Samples Haar unitaries X and random input states rho and reports the
    largest Hilbert-Schmidt norm of T_X(rho) - T(rho), where T_X rotates
    inputs by X on every input slot and unrotates every output slot.
    Zero within tolerance certifies covariance at sample resolution.
    """
    from functools import reduce

    if n_samples < 1:
        raise ValueError("need at least one sample")
    apply_fn, dd, n_in, m_out = _as_state_map(target, d)
    rng = _rng(seed)
    us = haar_unitaries(dd, n_samples, rng)
    rhos = random_density_matrices(dd**n_in, n_samples, rng)
    worst = 0.0
    for u, rho in zip(us, rhos):
        u_in = reduce(tensor, [u] * n_in) if n_in > 1 else u
        u_out = reduce(tensor, [u] * m_out) if m_out > 1 else u
        rotated = apply_fn(u_in @ rho @ u_in.conj().T)
        diff = u_out.conj().T @ rotated @ u_out - apply_fn(rho)
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst


def dual_map(chan: Channel) -> Channel:
    """Transpose map with respect to the Hilbert-Schmidt scalar product.

    Kraus operators are the adjoints of the originals; the dual of a
    trace-preserving map is unital, not trace preserving in general.
    """
    return Channel.from_kraus([k.conj().T for k in chan.kraus])


def backmap_operators(cloner: Cloner) -> list[np.ndarray]:
    """Input-space operators representing each reduced Bloch component.

    Component i of the first clone's Bloch vector equals tr(F_i rho^(x)n)
    with F_i the dual image of the coproduct of tau_i, averaged over input
    permutations.  Each F_i is traceless and Hermitian.
    """
    d, n, m = cloner.d, cloner.n, cloner.m
    big = d * d - 1
    dual = dual_map(cloner.channel)
    perms = list(permutations(range(n)))
    u_sigmas = [permutation_operator(p, d) for p in perms]
    out = []
    for i in range(1, big + 1):
        f = apply(dual, coproduct(i, d, m))
        f_sym = sum(u.conj().T @ f @ u for u in u_sigmas) / len(perms)
        out.append(f_sym)
    return out


@dataclass(frozen=True)
class CovarianceResidual:
    """Transformation defect of the back-mapped operators under rotation.

    ``per_index`` holds, for each Bloch component, the largest
    Hilbert-Schmidt norm over sampled unitaries of the symmetric-subspace
    restriction of U^(x)n F_i U^dagger(x)n - sum_j R_ji(U) F_j.  For a
    covariant cloner these vanish; the unrestricted norms
    (``full_space_max``) need not.
    """

    per_index: np.ndarray
    max_residual: float
    full_space_max: float
    n_samples: int
    seed: int


def covariance_residual(
    cloner: Cloner, n_samples: int = 20, seed=DEFAULT_SEED
) -> CovarianceResidual:
    from functools import reduce

    d, n = cloner.d, cloner.n
    big = d * d - 1
    fs = backmap_operators(cloner)
    proj = symmetric_projector(d, n)
    us = haar_unitaries(d, n_samples, seed)
    rots = adjoint_rotations(us)
    per_index = np.zeros(big)
    full_max = 0.0
    for u, rot in zip(us, rots):
        u_n = reduce(tensor, [u] * n) if n > 1 else u
        for i in range(big):
            a = u_n @ fs[i] @ u_n.conj().T
            a -= sum(rot[j, i] * fs[j] for j in range(big))
            restricted = proj @ a @ proj
            per_index[i] = max(per_index[i], float(np.linalg.norm(restricted)))
            full_max = max(full_max, float(np.linalg.norm(a)))
    return CovarianceResidual(
        per_index=per_index,
        max_residual=float(per_index.max()),
        full_space_max=full_max,
        n_samples=n_samples,
        seed=seed if isinstance(seed, int) else -1,
    )


class NonlinearCovariantMap:
    """State map rho -> (1 - g) I/d + g rho with g = gamma(tr rho^order).

    Covariant and trace preserving but not affine, so it has no Kraus
    form; on pure states it is a constant shrink of the Bloch vector,
    while on mixtures the shrink depends on the purity.
    """

    def __init__(self, order: int, gamma):
        if order < 2:
            raise ValueError("moment order must be at least 2")
        self.order = order
        self.gamma = gamma

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        d = rho.shape[0]
        moment = float(np.trace(np.linalg.matrix_power(rho, self.order)).real)
        g = float(self.gamma(moment))
        # Pure inputs sit on the boundary g = 1; allow rounding-level overshoot.
        if not -1e-12 <= g <= 1.0 + 1e-12:
            raise ValueError(f"gamma({moment}) = {g} falls outside [0, 1]")
        g = min(max(g, 0.0), 1.0)
        return (1.0 - g) * np.eye(d) / d + g * rho


def nonlinear_covariant(order: int, gamma) -> NonlinearCovariantMap:
    return NonlinearCovariantMap(order, gamma)


def affinity_witness(
    tmap, d: int, n_pairs: int = 200, seed=DEFAULT_SEED
) -> tuple[float, np.ndarray, np.ndarray]:
    """Search random pure pairs for a violation of affinity.

    Returns the largest Hilbert-Schmidt gap between the image of the
    equal mixture and the mixture of the images, with the witnessing pair.
    """
    rng = _rng(seed)
    kets = random_pure_states(d, 2 * n_pairs, rng)
    best = (0.0, None, None)
    for a, b in zip(kets[::2], kets[1::2]):
        rho1 = np.outer(a, a.conj())
        rho2 = np.outer(b, b.conj())
        mix = 0.5 * (rho1 + rho2)
        gap = float(np.linalg.norm(tmap(mix) - 0.5 * (tmap(rho1) + tmap(rho2))))
        if gap > best[0]:
            best = (gap, rho1, rho2)
    return best
