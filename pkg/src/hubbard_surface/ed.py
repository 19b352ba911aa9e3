"""Exact diagonalization of the open Hubbard chain with boundary fields.

Fermionic modes are ordered site-major then spin (mode ``2*j + s`` with
``s = 0`` for up, ``1`` for down), so the boundary spin-flip terms never pick
up a Jordan-Wigner string.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .model import ModelParams

log = logging.getLogger(__name__)

MAX_SITES = 12
DENSE_MAX_DIM = 4096
EIG_TOL = 1e-10


@dataclass
class FockOperator:
    """Hamiltonian restricted to a fixed-particle-number block."""

    matrix: sp.csr_matrix
    states: np.ndarray  # sorted occupation bitstrings spanning the block
    N: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    out = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        out += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return out


def basis_states(N: int, n_elec: int | None = None, n_up: int | None = None) -> np.ndarray:
    """Occupation bitstrings of 2N modes with the requested quantum numbers."""
    if n_elec is None:
        n_elec = N
    all_states = np.arange(1 << (2 * N), dtype=np.int64)
    pc = _popcount(all_states)
    mask = pc == n_elec
    if n_up is not None:
        up_mask = sum(1 << (2 * j) for j in range(N))
        mask &= _popcount(all_states & up_mask) == n_up
    return all_states[mask]


def _hop(states, a, b):
    """Matrix elements of c_a^dagger c_b on ``states`` (a != b)."""
    occ_b = (states >> b) & 1
    occ_a = (states >> a) & 1
    sel = (occ_b == 1) & (occ_a == 0)
    src = states[sel]
    dst = src ^ (1 << a) ^ (1 << b)
    lo, hi = min(a, b), max(a, b)
    between = ((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1)
    sign = 1 - 2 * (_popcount(src & between) % 2)
    return src, dst, sign


def build_hamiltonian(params: ModelParams, N: int, n_elec: int | None = None, n_up: int | None = None) -> FockOperator:
    """Sparse Hamiltonian in the block with ``n_elec`` electrons (default N).

    ``n_up`` restricts further to fixed S^z; only meaningful when both fields
    point along z.
    """
    if not 1 <= N <= MAX_SITES:
        raise ValueError(f"N must lie in [1, {MAX_SITES}], got {N}")
    h1 = np.asarray(params.h1, dtype=float)
    hN = np.asarray(params.hN, dtype=float)
    if n_up is not None and (h1[0] or h1[1] or hN[0] or hN[1]):
        raise ValueError("S^z blocking requires fields along z")
    states = basis_states(N, n_elec, n_up)
    dim = len(states)
    index = {int(s): i for i, s in enumerate(states)} if dim < 64 else None

    def lookup(dst):
        if index is not None:
            return np.array([index[int(d)] for d in dst], dtype=np.int64)
        return np.searchsorted(states, dst)

    complex_fields = bool(h1[1] or hN[1])
    dtype = complex if complex_fields else float
    rows, cols, vals = [], [], []

    def add(src, dst, amp):
        rows.append(lookup(dst))
        cols.append(lookup(src))
        vals.append(np.asarray(amp, dtype=dtype) * np.ones(len(src), dtype=dtype))

    # hopping, t = 1
    for j in range(N - 1):
        for s in (0, 1):
            a, b = 2 * j + s, 2 * (j + 1) + s
            for x, y in ((a, b), (b, a)):
                src, dst, sign = _hop(states, x, y)
                add(src, dst, -sign)

    up = np.zeros(dim, dtype=np.int64)
    dn = np.zeros(dim, dtype=np.int64)
    diag = np.zeros(dim, dtype=dtype)
    for j in range(N):
        up = (states >> (2 * j)) & 1
        dn = (states >> (2 * j + 1)) & 1
        diag += params.U * (up & dn)
    # boundary fields h.sigma at the two end sites
    ends = [(0, h1)] if N == 1 else [(0, h1), (N - 1, hN)]
    if N == 1:
        ends = [(0, h1 + hN)]
    for site, h in ends:
        up = (states >> (2 * site)) & 1
        dn = (states >> (2 * site + 1)) & 1
        diag += h[2] * (up - dn)
        h_minus = complex(h[0], -h[1])
        h_plus = complex(h[0], h[1])
        if h_minus != 0:
            u, d = 2 * site, 2 * site + 1
            src, dst, sign = _hop(states, u, d)  # c_up^dag c_dn
            add(src, dst, h_minus if complex_fields else h_minus.real)
            src, dst, sign = _hop(states, d, u)
            add(src, dst, h_plus if complex_fields else h_plus.real)
    rows.append(np.arange(dim))
    cols.append(np.arange(dim))
    vals.append(diag)
    H = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim), dtype=dtype
    )
    H.sum_duplicates()
    if abs(H - H.getH()).max() > 1e-14 if H.nnz else False:
        raise RuntimeError("assembled Hamiltonian is not Hermitian")
    return FockOperator(H, states, N)


def ground_energy(H: FockOperator | sp.spmatrix | np.ndarray, tol: float = EIG_TOL, dense: bool | None = None) -> float:
    """Lowest eigenvalue; dense for small blocks, Lanczos otherwise."""
    M = H.matrix if isinstance(H, FockOperator) else H
    dim = M.shape[0]
    if dense is None:
        dense = dim <= DENSE_MAX_DIM
    if dense:
        A = M.toarray() if sp.issparse(M) else np.asarray(M)
        return float(scipy.linalg.eigvalsh(A, subset_by_index=(0, 0))[0])
    rng = np.random.default_rng(0)
    v0 = rng.standard_normal(dim)
    for ncv in (20, 40, 80):
        try:
            w = spla.eigsh(M, k=1, which="SA", tol=tol * 1e-2, v0=v0, ncv=min(ncv, dim - 1), maxiter=20 * dim)
            return float(w[0][0])
        except spla.ArpackNoConvergence:
            log.warning("eigsh did not converge with ncv=%d, retrying", ncv)
    raise RuntimeError("Lanczos eigensolver failed to converge")


def parallel_equivalent(params: ModelParams) -> ModelParams:
    """Same magnitudes, both fields rotated onto +z."""
    return ModelParams.parallel(params.U, params.alpha, params.beta)


@dataclass
class SpectrumResult:
    N: int
    E: float
    E_hom: float
    delta_e: float


def half_filled_energy(params: ModelParams, N: int) -> float:
    return ground_energy(build_hamiltonian(params, N))


def sector_energies(params: ModelParams, N: int) -> dict[int, float]:
    """Half-filled ground energy per number of down spins (fields along z)."""
    out = {}
    for n_dn in range(N + 1):
        out[n_dn] = ground_energy(build_hamiltonian(params, N, n_elec=N, n_up=N - n_dn))
    return out


def delta_e(params: ModelParams, N: int) -> SpectrumResult:
    """|E - E_hom| at half filling, E_hom from the equivalent parallel fields."""
    E = half_filled_energy(params, N)
    E_hom = half_filled_energy(parallel_equivalent(params), N)
    return SpectrumResult(N=N, E=E, E_hom=E_hom, delta_e=abs(E - E_hom))


@dataclass
class PowerLawFit:
    gamma: float
    tau: float
    rms_log_residual: float
    max_log_residual: float


def fit_power_law(points) -> PowerLawFit:
    """Least-squares fit of delta_e = gamma * N**tau in log-log space."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or len(pts) < 3:
        raise ValueError("need at least three (N, delta_e) points")
    n, d = pts[:, 0], pts[:, 1]
    if np.any(d <= 0):
        raise ValueError("all delta_e must be positive for a log-log fit")
    x, y = np.log(n), np.log(d)
    A = np.column_stack([np.ones_like(x), x])
    (lg, tau), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - (lg + tau * x)
    return PowerLawFit(
        gamma=float(np.exp(lg)),
        tau=float(tau),
        rms_log_residual=float(np.sqrt(np.mean(res**2))),
        max_log_residual=float(np.max(np.abs(res))),
    )


def block_dimension(N: int) -> int:
    return comb(2 * N, N)
