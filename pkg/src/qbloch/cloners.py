"""N -> M cloning machines and their Bloch-space contraction analysis.

A cloner is a completely positive map from N copies of a d-level system
to M output slots.  For symmetric covariant cloners each reduced clone
is a pure contraction of the input Bloch vector; the scalar shrink
factor is recovered two independent ways (least-squares fit over Haar
pure states, and the coefficient-table summation) and cross-checked.
The reference construction projects rho^(x)N padded with identities
onto the totally symmetric subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations_with_replacement, permutations, product
from math import comb

import numpy as np

from . import gbr
from .channels import Channel, apply, compress_kraus
from .linalg import (
    DEFAULT_SEED,
    DimensionCapExceeded,
    partial_trace,
    random_density_matrices,
    random_pure_states,
    tensor,
    tensor_all,
)

# Cloner spaces are kept small enough for dense coefficient tables.
CLONER_DIM_CAP = 256
# Factorial blow-up cap for explicit symmetric-group averages.
SYMMETRIZE_MAX_M = 5

SYMMETRY_DEFECT_ATOL = 1e-10
COVARIANCE_DEFECT_ATOL = 1e-8


def _check_cloner_dim(d: int, n_factors: int) -> int:
    dim = d**n_factors
    if dim > CLONER_DIM_CAP:
        raise DimensionCapExceeded(
            f"{n_factors} factors of dimension {d} give {dim} > cap {CLONER_DIM_CAP}"
        )
    return dim


@dataclass(frozen=True)
class Cloner:
    """A channel from d^n to d^m carrying its copy-count metadata."""

    d: int
    n: int
    m: int
    channel: Channel

    def __post_init__(self):
        if not 1 <= self.n <= self.m:
            raise ValueError("need 1 <= n <= m")
        if self.channel.d_in != self.d**self.n or self.channel.d_out != self.d**self.m:
            raise ValueError("channel dimensions do not match (d, n, m)")


def permutation_operator(perm, d: int) -> np.ndarray:
    """Unitary permuting tensor slots: slot k of the output carries the
    input factor perm[k]."""
    perm = tuple(int(p) for p in perm)
    m = len(perm)
    if sorted(perm) != list(range(m)):
        raise ValueError(f"{perm} is not a permutation of 0..{m - 1}")
    dim = _check_cloner_dim(d, m)
    shape = (d,) * m
    cols = np.arange(dim)
    digits = np.unravel_index(cols, shape)
    rows = np.ravel_multi_index([digits[p] for p in perm], shape)
    u = np.zeros((dim, dim), dtype=complex)
    u[rows, cols] = 1.0
    return u


def compose_perms(sigma, pi) -> tuple:
    """Composition law matching the operators:
    permutation_operator(sigma) @ permutation_operator(pi)
    == permutation_operator(compose_perms(sigma, pi))."""
    return tuple(pi[s] for s in sigma)


def symmetric_dim(d: int, n: int) -> int:
    """Dimension of the totally symmetric subspace of n d-level factors."""
    return comb(n + d - 1, n)


@lru_cache(maxsize=None)
def _symmetric_isometry(d: int, n: int) -> np.ndarray:
    """Columns are the normalized symmetrized occupation-number vectors."""
    dim = _check_cloner_dim(d, n)
    shape = (d,) * n
    cols = []
    for combo in combinations_with_replacement(range(d), n):
        arrangements = set(permutations(combo))
        v = np.zeros(dim, dtype=complex)
        for arr in arrangements:
            v[np.ravel_multi_index(arr, shape)] = 1.0
        cols.append(v / np.sqrt(len(arrangements)))
    iso = np.array(cols).T
    iso.setflags(write=False)
    return iso


@lru_cache(maxsize=None)
def symmetric_projector(d: int, n: int) -> np.ndarray:
    """Projector (1/n!) sum_sigma U_sigma onto the symmetric subspace."""
    if n == 1:
        s = np.eye(d, dtype=complex)
    else:
        iso = _symmetric_isometry(d, n)
        s = iso @ iso.conj().T
    s.setflags(write=False)
    return s


def _slot_matrix(d: int, idx: int) -> np.ndarray:
    """Slot operator for a multi-index entry: 0 is the identity, i >= 1
    is the i-th su(d) basis element."""
    if idx == 0:
        return np.eye(d, dtype=complex)
    return gbr.gellmann_basis(d)[idx - 1]


def _embed_single(a: np.ndarray, d: int, m: int, slot: int) -> np.ndarray:
    mats = [np.eye(d, dtype=complex)] * m
    mats[slot] = a
    return tensor_all(mats)


def coproduct(i: int, d: int, m: int) -> np.ndarray:
    """Average of the single-slot embeddings of a basis element over m
    factors: (1/m) sum_l I x ... x tau_i x ... x I."""
    big = d * d - 1
    if not 0 <= i <= big:
        raise ValueError(f"basis index {i} out of range 0..{big}")
    _check_cloner_dim(d, m)
    a = _slot_matrix(d, i)
    out = np.zeros((d**m, d**m), dtype=complex)
    for l in range(m):
        out += _embed_single(a, d, m, l)
    return out / m


def symmetric_input(rho: np.ndarray, n: int) -> np.ndarray:
    """The n-fold tensor power rho^(x)n."""
    rho = np.asarray(rho, dtype=complex)
    if n < 1:
        raise ValueError("need n >= 1")
    _check_cloner_dim(rho.shape[0], n)
    return reduce(tensor, [rho] * n)


def reduced_map(cloner: Cloner, k: int, rho: np.ndarray) -> np.ndarray:
    """The k-th clone: trace over all output slots but k of T(rho^(x)n).

    k is a 0-based slot index.  The result is a state whenever the cloner
    preserves trace on the input's support.
    """
    if not 0 <= k < cloner.m:
        raise ValueError(f"clone index {k} out of range for m={cloner.m}")
    out = apply(cloner.channel, symmetric_input(rho, cloner.n))
    return partial_trace(out, [cloner.d] * cloner.m, keep=k)


def cloner_conjugate(cloner: Cloner, u: np.ndarray) -> Cloner:
    """Simultaneous conjugation: inputs rotated by u^(x)n, outputs by the
    inverse rotation on every slot."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (cloner.d, cloner.d):
        raise ValueError("unitary dimension does not match the cloner")
    u_in = reduce(tensor, [u] * cloner.n)
    u_out = reduce(tensor, [u] * cloner.m)
    kraus = [u_out.conj().T @ kk @ u_in for kk in cloner.channel.kraus]
    return Cloner(cloner.d, cloner.n, cloner.m, Channel.from_kraus(kraus))


def apply_permuted(cloner: Cloner, perm, rho_in: np.ndarray) -> np.ndarray:
    """Action of the cloner followed by a permutation of the output slots."""
    u = permutation_operator(perm, cloner.d)
    out = apply(cloner.channel, rho_in)
    return u @ out @ u.conj().T


def symmetry_defect(cloner: Cloner, n_states: int = 4, seed=DEFAULT_SEED) -> float:
    """Max over output permutations and random inputs of the action change."""
    if cloner.m > SYMMETRIZE_MAX_M:
        raise ValueError(f"m={cloner.m} exceeds the symmetric-group cap {SYMMETRIZE_MAX_M}")
    rhos = random_density_matrices(cloner.d**cloner.n, n_states, seed)
    worst = 0.0
    for rho in rhos:
        out = apply(cloner.channel, rho)
        for perm in permutations(range(cloner.m)):
            u = permutation_operator(perm, cloner.d)
            worst = max(worst, float(np.abs(u @ out @ u.conj().T - out).max()))
    return worst


@lru_cache(maxsize=None)
def _product_basis(d: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """All m-fold tensor products of {I, tau_1..tau_D} and their squared
    Hilbert-Schmidt norms.

    Returned stack has shape ((D+1)^m, d^m, d^m); index order is the
    base-(D+1) expansion of the multi-index, first slot most significant.
    """
    _check_cloner_dim(d, m)
    slots = [_slot_matrix(d, i) for i in range(d * d)]
    mats = []
    weights = []
    for combo in product(range(d * d), repeat=m):
        mats.append(reduce(np.kron, [slots[i] for i in combo]))
        w = 1.0
        for i in combo:
            w *= d if i == 0 else 2.0
        weights.append(w)
    stack = np.stack(mats)
    stack.setflags(write=False)
    wvec = np.array(weights)
    wvec.setflags(write=False)
    return stack, wvec


@dataclass(frozen=True)
class CoefficientTable:
    """Expansion coefficients of a cloner over the product basis.

    ``table[j, i]`` is the coefficient of the j-th output basis product in
    the image of the i-th input basis product, with multi-indices encoded
    base (D+1), first slot most significant.  ``tp_row_defect`` is the
    largest trace coefficient produced from a traceless input; it vanishes
    for maps that preserve trace on the whole input space (the reference
    symmetric-projector cloners with n >= 2 preserve trace only on the
    symmetric sector, so it need not vanish there).
    """

    d: int
    n: int
    m: int
    table: np.ndarray
    tp_row_defect: float

    def _code(self, idx) -> int:
        big = self.d * self.d
        code = 0
        for entry in idx:
            if not 0 <= entry < big:
                raise ValueError(f"multi-index entry {entry} out of range")
            code = code * big + int(entry)
        return code

    def coefficient(self, j_idx, i_idx) -> float:
        if len(j_idx) != self.m or len(i_idx) != self.n:
            raise ValueError("multi-index lengths must be (m, n)")
        return float(self.table[self._code(j_idx), self._code(i_idx)])

    def offset(self, j_idx) -> float:
        """Constant term for output multi-index j (image of I^(x)n / d^n)."""
        zero = self._code((0,) * self.n)
        return float(self.table[self._code(j_idx), zero]) / self.d**self.n


def multi_gbr(cloner: Cloner) -> CoefficientTable:
    """Full coefficient table by Hilbert-Schmidt projection on the product
    basis, with per-slot weights d (identity slot) and 2 (basis slot)."""
    d, n, m = cloner.d, cloner.n, cloner.m
    in_stack, _ = _product_basis(d, n)
    out_stack, out_w = _product_basis(d, m)
    outs = np.stack([apply(cloner.channel, a) for a in in_stack])
    raw = np.einsum("jab,nba->jn", out_stack, outs)
    table = raw.real / out_w[:, None]
    tp_defect = float(np.abs(table[0, 1:]).max()) if table.shape[1] > 1 else 0.0
    return CoefficientTable(d=d, n=n, m=m, table=table, tp_row_defect=tp_defect)


def _factor_formula_xi(cloner: Cloner) -> float:
    """Shrink factor from the coefficient table: with the per-slot weights
    above, xi = d^(m-n) * sum over input slots of the single-excitation
    coefficient; averaged over the basis index for numerical robustness."""
    d, n, m = cloner.d, cloner.n, cloner.m
    big = d * d - 1
    weight = 2.0 * d ** (m - 1)
    vals = []
    for j in range(1, big + 1):
        tau = _slot_matrix(d, j)
        total = 0.0
        for slot in range(n):
            out = apply(cloner.channel, _embed_single(tau, d, n, slot))
            red = partial_trace(out, [d] * m, keep=0)
            total += float(np.trace(tau @ red).real) / weight
        vals.append(d ** (m - n) * total)
    return float(np.mean(vals))


@dataclass(frozen=True)
class ShrinkResult:
    """Bloch contraction factor of a cloner's reduced maps.

    ``xi`` is the least-squares fit of output against input Bloch vectors
    over Haar pure states, ``factor_formula_xi`` the independent
    coefficient-table value; the two agree for certified (symmetric and
    covariant) cloners.  ``fit_residual`` is the worst per-sample
    deviation from a pure contraction.
    """

    xi: float
    fit_residual: float
    factor_formula_xi: float
    certified: bool
    sym_defect: float
    cov_defect: float


def shrink_factor(
    cloner: Cloner,
    n_samples: int = 100,
    seed=DEFAULT_SEED,
    allow_uncertified: bool = False,
) -> ShrinkResult:
    """Fit lam' = xi lam over Haar pure inputs and cross-check against the
    coefficient-table formula.

    Symmetry and covariance are certified first; a non-symmetric cloner is
    rejected unless ``allow_uncertified`` is set, and results for maps that
    fail either certificate are flagged rather than trusted.
    """
    from .symmetry import covariance_defect  # deferred: symmetry builds on cloners

    if n_samples < 1:
        raise ValueError("need at least one sample")
    sym = symmetry_defect(cloner, seed=seed)
    if sym > SYMMETRY_DEFECT_ATOL and not allow_uncertified:
        raise ValueError(
            f"cloner is not symmetric (defect {sym:.3e}); "
            "pass allow_uncertified=True to fit anyway"
        )
    cov = covariance_defect(cloner, n_samples=20, seed=seed)
    certified = sym <= SYMMETRY_DEFECT_ATOL and cov <= COVARIANCE_DEFECT_ATOL

    kets = random_pure_states(cloner.d, n_samples, seed)
    num = 0.0
    den = 0.0
    pairs = []
    for psi in kets:
        rho = np.outer(psi, psi.conj())
        lam = gbr.to_bloch(rho)
        lam_out = gbr.to_bloch(reduced_map(cloner, 0, rho))
        num += float(lam_out @ lam)
        den += float(lam @ lam)
        pairs.append((lam, lam_out))
    xi = num / den
    residual = max(float(np.linalg.norm(lo - xi * li)) for li, lo in pairs)
    return ShrinkResult(
        xi=xi,
        fit_residual=residual,
        factor_formula_xi=_factor_formula_xi(cloner),
        certified=certified,
        sym_defect=sym,
        cov_defect=cov,
    )


def werner_cloner(d: int, n: int, m: int) -> Cloner:
    """Reference symmetric covariant cloner: project n input copies padded
    with identities onto the symmetric subspace of m factors,

        rho -> (dim sym_n / dim sym_m) S_m (rho x I^(x)(m-n)) S_m,

    trace preserving on symmetric-sector inputs.
    """
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    _check_cloner_dim(d, m)
    scale = np.sqrt(symmetric_dim(d, n) / symmetric_dim(d, m))
    s = symmetric_projector(d, m)
    d_in = d**n
    n_anc = d ** (m - n)
    kraus = []
    for b in range(n_anc):
        e = np.zeros((n_anc, 1), dtype=complex)
        e[b, 0] = 1.0
        kraus.append(scale * (s @ np.kron(np.eye(d_in), e)))
    return Cloner(d, n, m, Channel.from_kraus(kraus))


def compose(t2: Cloner, t1: Cloner) -> Cloner:
    """Concatenate cloners: the outputs of t1 feed t2."""
    if t1.d != t2.d:
        raise ValueError("cloners act on different local dimensions")
    if t1.m != t2.n:
        raise ValueError(
            f"arity mismatch: first cloner emits {t1.m} copies, second expects {t2.n}"
        )
    kraus = [k2 @ k1 for k2 in t2.channel.kraus for k1 in t1.channel.kraus]
    chan = Channel.from_kraus(kraus)
    if len(kraus) > chan.d_in * chan.d_out:
        chan = compress_kraus(chan)
    return Cloner(t1.d, t1.n, t2.m, chan)


@dataclass(frozen=True)
class QubitOptimum:
    """Analytic optimum of the qubit 1 -> 2 covariant symmetric ansatz.

    ``spectrum`` evaluates the closed-form eigenvalue triple
    (1 + 2 xi r + t)/4, (1 - 2 xi r + t)/4, (1 - 3 t)/4 of the assembled
    two-clone output at Bloch radius r; the full 4x4 output also carries
    the eigenvalue (1 + t)/4.  ``output_state`` assembles the output for a
    given input Bloch vector; ``cloner`` is the matching reference cloner.
    """

    t: float
    xi: float
    cloner: Cloner

    def spectrum(self, t: float | None = None, xi: float | None = None, r: float = 1.0):
        t = self.t if t is None else t
        xi = self.xi if xi is None else xi
        return (
            0.25 * (1.0 + 2.0 * xi * r + t),
            0.25 * (1.0 - 2.0 * xi * r + t),
            0.25 * (1.0 - 3.0 * t),
        )

    def output_state(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        if lam.shape != (3,):
            raise ValueError("expected a 3-component Bloch vector")
        paulis = gbr.gellmann_basis(2)
        eye = np.eye(2)
        c2 = sum(np.kron(p, p) for p in paulis)
        out = np.eye(4, dtype=complex) + self.t * c2
        for l, p in zip(lam, paulis):
            out += self.xi * l * (np.kron(p, eye) + np.kron(eye, p))
        return 0.25 * out


def optimal_qubit_12() -> QubitOptimum:
    """Maximize the qubit 1 -> 2 shrink factor analytically.

    The two-clone ansatz (I + t C_2 + xi sum_a lam_a S_a)/4 is positive on
    every pure input iff 1 - 3t >= 0 and 1 - 2 xi + t >= 0; xi = (1 + t)/2
    is increasing in t, so both constraints bind: t = 1/3, xi = 2/3.
    """
    t = 1.0 / 3.0
    xi = (1.0 + t) / 2.0
    return QubitOptimum(t=t, xi=xi, cloner=werner_cloner(2, 1, 2))
