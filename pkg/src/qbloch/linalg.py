"""Dense complex matrix kernel.

Tensor products, partial traces, Hermitian spectra, Hilbert-Schmidt
geometry, and seeded Haar-random sampling.  Everything here is a pure
function of its inputs; returned arrays are fresh and safe to share
across threads.  Sampling takes an explicit seed; parallel callers
should partition the seed space (worker ``i`` uses ``base + i``).
"""

from __future__ import annotations

import os

import numpy as np

# Hermiticity is checked at a fixed absolute max-norm tolerance; callers
# cannot override it, so every module sees the same semantics.
HERMITIAN_ATOL = 1e-12
EIG_RECONSTRUCT_ATOL = 1e-10
# Eigenvalue floor for positive-semidefinite checks (states, Choi matrices).
PSD_ATOL = 1e-10

DEFAULT_DIM_CAP = 4096
DIM_CAP_ENV = "QBLOCH_DIM_CAP"

DEFAULT_SEED = 2024

SeedLike = "int | np.random.Generator"


class DimensionCapExceeded(ValueError):
    """Requested tensor dimension exceeds the configured cap."""


def dim_cap() -> int:
    """Current cap on tensor-product dimensions (env QBLOCH_DIM_CAP overrides)."""
    raw = os.environ.get(DIM_CAP_ENV)
    return int(raw) if raw else DEFAULT_DIM_CAP


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    return a


def _require_square_same(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise ValueError("inputs must be square matrices")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def is_hermitian(a: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    a = _as_matrix(a)
    return a.shape[0] == a.shape[1] and np.abs(a - a.conj().T).max() <= atol


def require_hermitian(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    a = _as_matrix(a)
    if not is_hermitian(a):
        dev = np.abs(a - a.conj().T).max()
        raise ValueError(f"{what} is not Hermitian (max deviation {dev:.3e})")
    return a


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt scalar product tr(a b^dagger)."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    _require_square_same(a, b)
    # vdot conjugates its first argument, so this is sum_ij conj(b_ij) a_ij.
    return complex(np.vdot(b, a))


def hs_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Normalized Hilbert-Schmidt distance 2^(-1/2) ||a - b||_F for Hermitian inputs."""
    a = require_hermitian(a, "first argument")
    b = require_hermitian(b, "second argument")
    _require_square_same(a, b)
    diff = a - b
    val = hs_inner(diff, diff)
    # The inner product of a matrix with itself is real up to rounding.
    return float(np.sqrt(max(val.real, 0.0) / 2.0))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with a hard cap on the resulting dimension."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    cap = dim_cap()
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > cap or cols > cap:
        raise DimensionCapExceeded(
            f"tensor result {rows}x{cols} exceeds dimension cap {cap}"
        )
    return np.kron(a, b)


def tensor_all(mats) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    mats = list(mats)
    if not mats:
        raise ValueError("tensor_all needs at least one matrix")
    out = _as_matrix(mats[0])
    for m in mats[1:]:
        out = tensor(out, m)
    return out


def partial_trace(a: np.ndarray, factor_dims, keep: int) -> np.ndarray:
    """Trace out all tensor factors except ``keep``.

    ``factor_dims`` lists the local dimensions of the tensor factors, whose
    product must equal the matrix dimension.  Returns a matrix of dimension
    ``factor_dims[keep]``.
    """
    a = _as_matrix(a)
    dims = [int(x) for x in factor_dims]
    if any(d < 1 for d in dims):
        raise ValueError("factor dimensions must be positive")
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise ValueError(
            f"matrix of shape {a.shape} inconsistent with factors {dims}"
        )
    n = len(dims)
    if not 0 <= keep < n:
        raise ValueError(f"keep index {keep} out of range for {n} factors")
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise ValueError("too many tensor factors")
    ket = list(letters[:n])
    bra = list(letters[n : 2 * n])
    for j in range(n):
        if j != keep:
            bra[j] = ket[j]
    spec = "".join(ket) + "".join(bra) + "->" + ket[keep] + bra[keep]
    return np.einsum(spec, a.reshape(dims + dims))


def eig_hermitian(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Verifies the decomposition reconstructs the input before returning.
    """
    a = require_hermitian(a)
    w, v = np.linalg.eigh(a)
    recon = (v * w) @ v.conj().T
    err = np.abs(a - recon).max()
    if err > EIG_RECONSTRUCT_ATOL:
        raise ValueError(f"eigendecomposition failed to reconstruct (error {err:.3e})")
    return w


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _haar_from_rng(rng: np.random.Generator, d: int, n: int) -> np.ndarray:
    """Stack of n Haar special unitaries of dimension d, shape (n, d, d)."""
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    q, r = np.linalg.qr(z)
    diag = np.einsum("nii->ni", r)
    # Phase-normalize the triangular factor's diagonal so q is Haar on U(d).
    q = q * (diag / np.abs(diag))[:, None, :]
    # Fix the global phase so det = 1; the pushforward is Haar on SU(d).
    det = np.linalg.det(q)
    q = q * (det ** (-1.0 / d))[:, None, None]
    return q


def haar_unitary(d: int, seed=DEFAULT_SEED) -> np.ndarray:
    """One Haar-random special unitary of dimension d, deterministic per seed."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return _haar_from_rng(_rng(seed), d, 1)[0]


def haar_unitaries(d: int, n: int, seed=DEFAULT_SEED) -> np.ndarray:
    """Batch of n Haar-random special unitaries, shape (n, d, d)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if n < 1:
        raise ValueError("need at least one sample")
    return _haar_from_rng(_rng(seed), d, n)


def random_pure_states(d: int, n: int, seed=DEFAULT_SEED) -> np.ndarray:
    """n Haar-random unit kets, shape (n, d): normalized complex Gaussians."""
    rng = _rng(seed)
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_pure_state(d: int, seed=DEFAULT_SEED) -> np.ndarray:
    """One Haar-random pure state as a d x d projector."""
    psi = random_pure_states(d, 1, seed)[0]
    return np.outer(psi, psi.conj())


def random_density_matrices(d: int, n: int, seed=DEFAULT_SEED) -> np.ndarray:
    """n random density matrices U diag(p) U^dagger, shape (n, d, d).

    Spectra are flat-simplex samples and the eigenbases are Haar unitaries.
    """
    rng = _rng(seed)
    p = rng.dirichlet(np.ones(d), size=n)
    u = _haar_from_rng(rng, d, n)
    return np.einsum("nab,nb,ncb->nac", u, p, u.conj())


def random_density_matrix(d: int, seed=DEFAULT_SEED) -> np.ndarray:
    return random_density_matrices(d, 1, seed)[0]
