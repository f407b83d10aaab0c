"""Quantum channels in Kraus form and their affine Bloch-space representation.

A channel T acts as rho -> sum_k K rho K^dagger.  On Bloch vectors a
trace-preserving channel acts affinely, lam' = M lam + c; unitary
conjugation by SU(d) elements lands in SO(D) via the adjoint rotation.
Channels are immutable value objects, safe for concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gbr
from .linalg import (
    PSD_ATOL,
    DEFAULT_SEED,
    _rng,
    partial_trace,
)

# Trace preservation tolerance on ||sum K^dagger K - I||_max.
TP_ATOL = 1e-10
# Unitarity / special-unitarity tolerance for rotation extraction.
SU_ATOL = 1e-10
# Eigenvalues below this are dropped when extracting Kraus operators.
KRAUS_RANK_ATOL = 1e-12


class CompletePositivityError(ValueError):
    """Raised when a map fails complete positivity.

    Carries the offending Choi eigenvalue in ``min_eigenvalue``.
    """

    def __init__(self, msg: str, min_eigenvalue: float):
        super().__init__(msg)
        self.min_eigenvalue = min_eigenvalue


@dataclass(frozen=True)
class Channel:
    """Completely positive map stored as a Kraus list with its dimensions.

    Not every instance is trace preserving (transpose maps are unital
    instead); use ``tp_defect``/``is_cptp`` where the contract needs it.
    """

    kraus: tuple[np.ndarray, ...]
    d_in: int
    d_out: int

    @classmethod
    def from_kraus(cls, mats) -> "Channel":
        mats = tuple(np.asarray(m, dtype=complex) for m in mats)
        if not mats:
            raise ValueError("a channel needs at least one Kraus operator")
        d_out, d_in = mats[0].shape
        for m in mats:
            if m.shape != (d_out, d_in):
                raise ValueError("Kraus operators must share a common shape")
        return cls(kraus=mats, d_in=d_in, d_out=d_out)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)


def identity_channel(d: int) -> Channel:
    return Channel.from_kraus([np.eye(d)])


def apply(chan: Channel, rho: np.ndarray) -> np.ndarray:
    """Evaluate sum_k K rho K^dagger."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (chan.d_in, chan.d_in):
        raise ValueError(
            f"state of shape {rho.shape} does not match channel input dimension {chan.d_in}"
        )
    out = np.zeros((chan.d_out, chan.d_out), dtype=complex)
    for k in chan.kraus:
        out += k @ rho @ k.conj().T
    return out


def apply_batch(chan: Channel, rhos: np.ndarray) -> np.ndarray:
    """Apply the channel to a stack of states of shape (n, d_in, d_in)."""
    rhos = np.asarray(rhos, dtype=complex)
    ks = np.stack(chan.kraus)
    return np.einsum("kab,nbc,kdc->nad", ks, rhos, ks.conj())


def tp_defect(chan: Channel) -> float:
    """Max-norm deviation of sum K^dagger K from the identity."""
    acc = np.zeros((chan.d_in, chan.d_in), dtype=complex)
    for k in chan.kraus:
        acc += k.conj().T @ k
    return float(np.abs(acc - np.eye(chan.d_in)).max())


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi state (T otimes Id) applied to the normalized maximally
    entangled projector; output factor first, input copy second.

    Trace preservation reads tr_out J = I / d_in in this normalization.
    """

    matrix: np.ndarray
    d_in: int
    d_out: int


def kraus_to_choi(chan: Channel) -> ChoiMatrix:
    d_in, d_out = chan.d_in, chan.d_out
    j = np.zeros((d_in * d_out, d_in * d_out), dtype=complex)
    for k in chan.kraus:
        v = k.reshape(-1) / np.sqrt(d_in)  # (K otimes I)|Omega> in kron order
        j += np.outer(v, v.conj())
    return ChoiMatrix(matrix=j, d_in=d_in, d_out=d_out)


def choi_to_kraus(choi: ChoiMatrix) -> Channel:
    """Kraus operators from the Choi eigendecomposition (rank-truncated)."""
    w, v = np.linalg.eigh(choi.matrix)
    if w[0] < -PSD_ATOL:
        raise CompletePositivityError(
            f"Choi matrix has negative eigenvalue {w[0]:.3e}", float(w[0])
        )
    mats = []
    for wi, vec in zip(w, v.T):
        if wi > KRAUS_RANK_ATOL:
            mats.append(np.sqrt(wi * choi.d_in) * vec.reshape(choi.d_out, choi.d_in))
    if not mats:
        raise ValueError("Choi matrix is numerically zero")
    return Channel.from_kraus(mats)


def choi_min_eig(chan: Channel) -> float:
    return float(np.linalg.eigvalsh(kraus_to_choi(chan).matrix)[0])


def is_cptp(chan: Channel, tp_atol: float = TP_ATOL, cp_atol: float = PSD_ATOL) -> bool:
    return tp_defect(chan) <= tp_atol and choi_min_eig(chan) >= -cp_atol


def compress_kraus(chan: Channel) -> Channel:
    """Re-extract a minimal Kraus set through the Choi matrix."""
    return choi_to_kraus(kraus_to_choi(chan))


@dataclass(frozen=True)
class AffineRep:
    """Bloch-space action lam -> matrix @ lam + offset of a channel."""

    matrix: np.ndarray
    offset: np.ndarray
    d_in: int
    d_out: int

    def __call__(self, lam: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(lam, dtype=float) + self.offset


def affine_rep(chan: Channel) -> AffineRep:
    """Extract (M, c) with M_ji = tr(tau_j T(tau_i)) / 2 and c the Bloch
    vector of T(I/d), so that to_bloch(T(rho)) = M @ to_bloch(rho) + c.
    """
    if chan.d_in != chan.d_out:
        raise ValueError("affine representation requires a square channel")
    d = chan.d_in
    stack = gbr.basis_stack(d)
    outs = apply_batch(chan, stack)
    m = 0.5 * np.einsum("jab,iba->ji", stack, outs).real
    c = gbr.to_bloch(apply(chan, np.eye(d) / d))
    return AffineRep(matrix=m, offset=c, d_in=d, d_out=d)


def _require_special_unitary(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    d = x.shape[0]
    if x.shape != (d, d):
        raise ValueError("expected a square matrix")
    if np.abs(x @ x.conj().T - np.eye(d)).max() > SU_ATOL:
        raise ValueError("matrix is not unitary within tolerance")
    det = np.linalg.det(x)
    if abs(det - 1.0) > SU_ATOL:
        raise ValueError(f"matrix has determinant {det}, expected 1")
    return x


def unitary_rotation(x: np.ndarray) -> np.ndarray:
    """SO(D) rotation induced by X in SU(d): R_ji = tr(tau_j X tau_i X^dagger)/2."""
    x = _require_special_unitary(x)
    return adjoint_rotations(x[None, :, :])[0]


def adjoint_rotations(us: np.ndarray) -> np.ndarray:
    """Batched adjoint rotations for a stack of unitaries, shape (n, D, D)."""
    us = np.asarray(us, dtype=complex)
    d = us.shape[-1]
    stack = gbr.basis_stack(d)
    conj = np.einsum("nab,ibc,ndc->niad", us, stack, us.conj())
    return 0.5 * np.einsum("jab,niba->nji", stack, conj).real


def _weyl_operators(d: int) -> list[np.ndarray]:
    """Shift/clock unitaries W_jk = X^j Z^k; averaging their conjugations
    over all (j, k) sends every state to I/d."""
    shift = np.zeros((d, d), dtype=complex)
    for m in range(d):
        shift[(m + 1) % d, m] = 1
    omega = np.exp(2j * np.pi / d)
    clock = np.diag(omega ** np.arange(d))
    ops = []
    xj = np.eye(d, dtype=complex)
    for _ in range(d):
        zk = np.eye(d, dtype=complex)
        for _ in range(d):
            ops.append(xj @ zk)
            zk = zk @ clock
        xj = xj @ shift
    return ops


def depolarizing_choi_min_eig(d: int, xi: float) -> float:
    """Smallest Choi eigenvalue of rho -> (1-xi) I/d + xi rho (closed form)."""
    return float(min(xi + (1.0 - xi) / d**2, (1.0 - xi) / d**2))


def depolarizing(d: int, xi: float) -> Channel:
    """Channel rho -> (1 - xi) I/d + xi rho.

    Complete positivity restricts xi to [-1/(d^2-1), 1]; outside that
    range the violated Choi eigenvalue is reported.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    lo = -1.0 / (d * d - 1)
    if not (lo - 1e-12 <= xi <= 1.0 + 1e-12):
        raise CompletePositivityError(
            f"xi={xi} outside CP range [{lo}, 1]: Choi eigenvalue "
            f"{depolarizing_choi_min_eig(d, xi):.6e}",
            depolarizing_choi_min_eig(d, xi),
        )
    w_id = xi + (1.0 - xi) / d**2
    w_rest = (1.0 - xi) / d**2
    mats = []
    if w_id > 0:
        mats.append(np.sqrt(w_id) * np.eye(d))
    if w_rest > 0:
        for op in _weyl_operators(d)[1:]:
            mats.append(np.sqrt(w_rest) * op)
    return Channel.from_kraus(mats)


def conjugate_action(chan: Channel, u: np.ndarray) -> Channel:
    """The conjugated channel rho -> U^dagger T(U rho U^dagger) U."""
    if chan.d_in != chan.d_out:
        raise ValueError("conjugate action requires a square channel")
    u = _require_special_unitary(u)
    if u.shape[0] != chan.d_in:
        raise ValueError("unitary dimension does not match the channel")
    ud = u.conj().T
    return Channel.from_kraus([ud @ k @ u for k in chan.kraus])


def random_channel(d_in: int, d_out: int, kraus_rank: int, seed=DEFAULT_SEED) -> Channel:
    """Random CPTP channel from a Haar-ish Stinespring isometry."""
    if kraus_rank < 1:
        raise ValueError("kraus_rank must be positive")
    rng = _rng(seed)
    g = rng.standard_normal((d_out * kraus_rank, d_in)) + 1j * rng.standard_normal(
        (d_out * kraus_rank, d_in)
    )
    q, _ = np.linalg.qr(g)
    blocks = q.reshape(kraus_rank, d_out, d_in)
    return Channel.from_kraus(list(blocks))


def mix_channels(t1: Channel, t2: Channel, mu: float) -> Channel:
    """Convex mixture mu T1 + (1 - mu) T2 via a weighted Kraus union."""
    if (t1.d_in, t1.d_out) != (t2.d_in, t2.d_out):
        raise ValueError("channels must share dimensions to be mixed")
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    mats = [np.sqrt(mu) * k for k in t1.kraus] + [
        np.sqrt(1.0 - mu) * k for k in t2.kraus
    ]
    return Channel.from_kraus(mats)


def choi_tp_defect(choi: ChoiMatrix) -> float:
    """Deviation of tr_out J from I/d_in."""
    red = partial_trace(choi.matrix, [choi.d_out, choi.d_in], keep=1)
    return float(np.abs(red - np.eye(choi.d_in) / choi.d_in).max())
