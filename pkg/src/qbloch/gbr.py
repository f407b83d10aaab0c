"""Generalized Bloch representation for d-level systems.

An orthogonal traceless Hermitian basis {tau_i} of su(d) with
tr(tau_i tau_j) = 2 delta_ij turns every unit-trace Hermitian operator
into a real vector of length D = d^2 - 1:

    rho(lam) = I/d + (1/2) sum_i lam_i tau_i,      lam_i = tr(tau_i rho).

Pure states land on the sphere of radius R_d = sqrt(2(1 - 1/d)); for
d > 2 the physical region is a proper subset of the ball, so
``is_physical_bloch`` checks positivity explicitly.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .linalg import HERMITIAN_ATOL, PSD_ATOL, require_hermitian

# Max tolerated imaginary leakage when projecting onto the basis.
IMAG_ATOL = 1e-12
TRACE_ATOL = 1e-12


@lru_cache(maxsize=None)
def gellmann_basis(d: int) -> tuple[np.ndarray, ...]:
    """Orthogonal su(d) basis, tr(tau_i tau_j) = 2 delta_ij.

    Ordering is fixed for reproducibility: symmetric off-diagonal pairs,
    then antisymmetric off-diagonal pairs (both lexicographic in (j, k)),
    then the d - 1 diagonal matrices.  For d = 2 this is (sigma_x,
    sigma_y, sigma_z).
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    mats: list[np.ndarray] = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1
            m[k, j] = 1
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[:l, :l] = np.eye(l)
        m[l, l] = -l
        mats.append(np.sqrt(2.0 / (l * (l + 1))) * m)
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


@lru_cache(maxsize=None)
def basis_stack(d: int) -> np.ndarray:
    """The basis as a read-only (D, d, d) array for vectorized projections."""
    stack = np.stack(gellmann_basis(d))
    stack.setflags(write=False)
    return stack


def _infer_dim(lam: np.ndarray) -> int:
    big = lam.shape[0] + 1
    d = int(round(np.sqrt(big)))
    if d * d != big or d < 2:
        raise ValueError(f"vector length {lam.shape[0]} is not d^2 - 1 for any d >= 2")
    return d


def to_bloch(rho: np.ndarray) -> np.ndarray:
    """Bloch vector lam_i = tr(tau_i rho) of a unit-trace Hermitian operator."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    raw = np.einsum("iab,ba->i", basis_stack(d), rho)
    leak = np.abs(raw.imag).max()
    if leak > IMAG_ATOL:
        raise ValueError(
            f"non-Hermitian input: imaginary component {leak:.3e} in Bloch projection"
        )
    return raw.real


def from_bloch(lam, d: int | None = None) -> np.ndarray:
    """Operator I/d + (1/2) sum_i lam_i tau_i.  Unit trace, Hermitian.

    Positivity is not guaranteed; use ``is_physical_bloch`` for that.
    """
    lam = np.asarray(lam, dtype=float)
    if d is None:
        d = _infer_dim(lam)
    elif lam.shape[0] != d * d - 1:
        raise ValueError(f"vector length {lam.shape[0]} does not match d={d}")
    return np.eye(d) / d + 0.5 * np.einsum("i,iab->ab", lam, basis_stack(d))


def bloch_radius(d: int) -> float:
    """Radius sqrt(2 (1 - 1/d)) of the pure-state sphere."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return float(np.sqrt(2.0 * (1.0 - 1.0 / d)))


def max_angle(d: int) -> float:
    """Largest angle arccos(1/(1-d)) between Bloch vectors of states."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return float(np.arccos(1.0 / (1.0 - d)))


def is_physical_bloch(lam, d: int | None = None) -> tuple[bool, float]:
    """Whether rho(lam) is positive semidefinite.

    Returns ``(ok, witness)`` where witness is the minimum eigenvalue of
    rho(lam); a negative witness below tolerance certifies the vector lies
    outside the state-space image.
    """
    rho = from_bloch(lam, d)
    wmin = float(np.linalg.eigvalsh(rho)[0])
    return wmin >= -PSD_ATOL, wmin


def check_density(rho: np.ndarray, what: str = "state") -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    rho = require_hermitian(np.asarray(rho, dtype=complex), what)
    tr = np.trace(rho)
    if abs(tr - 1.0) > max(TRACE_ATOL, 10 * HERMITIAN_ATOL * rho.shape[0]):
        raise ValueError(f"{what} has trace {tr}, expected 1")
    wmin = float(np.linalg.eigvalsh(rho)[0])
    if wmin < -PSD_ATOL:
        raise ValueError(f"{what} has negative eigenvalue {wmin:.3e}")
    return rho
