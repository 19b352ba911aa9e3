"""Finite-N solver for the reduced (parallel-field) Bethe equations at half filling.

Unknowns are the real charge momenta ``k`` in (0, pi), the real spin
rapidities ``lam`` > 0 and, optionally, the imaginary parts of the spin
strings attached to boundaries with h0 < |h| < 1.  Charge strings (|h| > 1)
and their companion spin strings stay pinned at their exact positions.

Logarithmic form used throughout (t = 1, s = sin k)::

    2kN + g_a(k) + g_b(k) + 2 sum_l [atan(4(s+lam_l)/U) + atan(4(s-lam_l)/U)]
        - sum_str [2 atan(s/(y-U/4)) - 2 atan(s/(y+U/4))] = 2 pi (I + 1/2)

    2 atan(lam/p_a) + 2 atan(lam/p_b)
        + sum_k 2 [atan(4(lam+s)/U) + atan(4(lam-s)/U)]
        + sum_kstr [2 atan(lam/(x+U/4)) - 2 atan(lam/(x-U/4))]
        - sum_{l != j} 2 [atan(2(lam-lam_l)/U) + atan(2(lam+lam_l)/U)]
        - sum_str [2 atan(lam/(y+U/2)) - 2 atan(lam/(y-U/2))] = 2 pi J

with ``g_h(k) = -atan((h^2-1)/(2 h s)) - atan(cos k (1-h^2) / (s (1+h^2)))``
and ``p_h = (1-h^2)/(2h) - U/4``.  Ground state: I = 1/2, ..., J = 1, ...
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .model import (
    BoundaryClass,
    BoundaryString,
    BoundaryStringSet,
    DerivedConstants,
    Region,
    constants_from_magnitudes,
)

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
EPS = np.finfo(float).eps


class BaeConvergenceError(RuntimeError):
    def __init__(self, msg, best_residual=math.inf):
        super().__init__(msg)
        self.best_residual = best_residual


class RootCollisionError(BaeConvergenceError):
    """Two roots merged (or a root hit zero) during the solve."""


@dataclass(frozen=True)
class QuantumNumbers:
    I: np.ndarray
    J: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "I", np.asarray(self.I, dtype=float))
        object.__setattr__(self, "J", np.asarray(self.J, dtype=float))


def ground_state_quantum_numbers(N: int, n_k_strings: int = 0, n_lambda_strings: int = 0) -> QuantumNumbers:
    """I = 1/2 ... N-1/2 and J = 1 ... N/2, largest entries removed per string."""
    if N < 2 or N % 2:
        raise ValueError(f"N must be even and >= 2, got {N}")
    I = np.arange(N) + 0.5
    J = np.arange(1, N // 2 + 1, dtype=float)
    if n_k_strings > N or n_lambda_strings > N // 2:
        raise ValueError("more strings than roots")
    return QuantumNumbers(I[: N - n_k_strings], J[: N // 2 - n_lambda_strings])


@dataclass
class RootConfiguration:
    N: int
    k_real: np.ndarray
    lambda_real: np.ndarray
    strings: BoundaryStringSet = field(default_factory=BoundaryStringSet)

    @property
    def M(self) -> int:
        return self.N // 2

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "k_real": [float(v) for v in self.k_real],
            "lambda_real": [float(v) for v in self.lambda_real],
            "strings": [{"kind": s.kind, "value": s.value, "side": s.side} for s in self.strings.strings],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RootConfiguration":
        strings = BoundaryStringSet(tuple(BoundaryString(s["kind"], float(s["value"]), s["side"]) for s in d["strings"]))
        return cls(int(d["N"]), np.asarray(d["k_real"], float), np.asarray(d["lambda_real"], float), strings)


@dataclass
class BaeSolution:
    roots: RootConfiguration
    qn: QuantumNumbers
    residual_norm: float
    E_hom: float
    iterations: int
    converged: bool
    pattern: str = "strings"
    U: float = float("nan")
    alpha: float = float("nan")
    beta: float = float("nan")
    region: str = ""

    def to_json(self) -> str:
        d = self.roots.to_dict()
        d.update(
            U=self.U,
            alpha=self.alpha,
            beta=self.beta,
            region=self.region,
            residual_norm=self.residual_norm,
            E_hom=self.E_hom,
            I=[float(v) for v in self.qn.I],
            J=[float(v) for v in self.qn.J],
            pattern=self.pattern,
            iterations=self.iterations,
            converged=self.converged,
        )
        return json.dumps(d, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "BaeSolution":
        d = json.loads(text)
        return cls(
            roots=RootConfiguration.from_dict(d),
            qn=QuantumNumbers(d["I"], d["J"]),
            residual_norm=d["residual_norm"],
            E_hom=d["E_hom"],
            iterations=d["iterations"],
            converged=d["converged"],
            pattern=d["pattern"],
            U=d["U"],
            alpha=d["alpha"],
            beta=d["beta"],
            region=d["region"],
        )


def energy_from_roots(config: RootConfiguration) -> float:
    """-2 sum cos k; a charge string with sin k = ix contributes -2 sqrt(1 + x^2)."""
    E = -2.0 * float(np.sum(np.cos(config.k_real)))
    for x in config.strings.k_strings:
        E -= 2.0 * math.sqrt(1.0 + x * x)
    return E


# ---------------------------------------------------------------------------
# residuals and Jacobian


def _g_boundary(h, k, s):
    return -np.arctan((h * h - 1.0) / (2.0 * h * s)) - np.arctan(np.cos(k) * (1.0 - h * h) / (s * (1.0 + h * h)))


def _dg_boundary(h, k, s):
    A = (h * h - 1.0) / (2.0 * h)
    B = (1.0 - h * h) / (1.0 + h * h)
    c = np.cos(k)
    return A * c / (s * s + A * A) + B / (s * s + B * B * c * c)


def log_residuals(config: RootConfiguration, dc: DerivedConstants, qn: QuantumNumbers) -> np.ndarray:
    """Charge residuals for each real k followed by spin residuals for each real lambda."""
    U, a, b, N = dc.U, dc.alpha, dc.beta, config.N
    k = np.asarray(config.k_real, float)
    lam = np.asarray(config.lambda_real, float)
    if len(k) != len(qn.I) or len(lam) != len(qn.J):
        raise ValueError("root counts do not match quantum numbers")
    s = np.sin(k)
    ys = config.strings.lambda_strings
    xs = config.strings.k_strings

    sp = s[:, None] + lam[None, :]
    sm = s[:, None] - lam[None, :]
    Rc = 2.0 * k * N + _g_boundary(a, k, s) + _g_boundary(b, k, s)
    Rc += 2.0 * np.sum(np.arctan(4.0 * sp / U) + np.arctan(4.0 * sm / U), axis=1)
    for y in ys:
        Rc -= 2.0 * np.arctan(s / (y - U / 4.0)) - 2.0 * np.arctan(s / (y + U / 4.0))
    Rc -= TWO_PI * (qn.I + 0.5)

    pa, pb = dc.p_alpha, dc.p_beta
    Rs = 2.0 * np.arctan(lam / pa) + 2.0 * np.arctan(lam / pb)
    Rs += 2.0 * np.sum(np.arctan(4.0 * sp.T / U) - np.arctan(4.0 * sm.T / U), axis=1)
    for x in xs:
        Rs += 2.0 * np.arctan(lam / (x + U / 4.0)) - 2.0 * np.arctan(lam / (x - U / 4.0))
    d = lam[:, None] - lam[None, :]
    p = lam[:, None] + lam[None, :]
    Rs -= 2.0 * np.sum(np.arctan(2.0 * d / U) + np.arctan(2.0 * p / U), axis=1) - 2.0 * np.arctan(4.0 * lam / U)
    for y in ys:
        Rs -= 2.0 * np.arctan(lam / (y + U / 2.0)) - 2.0 * np.arctan(lam / (y - U / 2.0))
    Rs -= TWO_PI * qn.J
    return np.concatenate([Rc, Rs])


def _jacobian_real(config: RootConfiguration, dc: DerivedConstants) -> np.ndarray:
    U, a, b, N = dc.U, dc.alpha, dc.beta, config.N
    k = np.asarray(config.k_real, float)
    lam = np.asarray(config.lambda_real, float)
    nk, nl = len(k), len(lam)
    s, c = np.sin(k), np.cos(k)
    ys = config.strings.lambda_strings
    xs = config.strings.k_strings
    J = np.zeros((nk + nl, nk + nl))

    kp = 8.0 * U / (U * U + 16.0 * (s[:, None] + lam[None, :]) ** 2)
    km = 8.0 * U / (U * U + 16.0 * (s[:, None] - lam[None, :]) ** 2)
    # charge rows
    diag = 2.0 * N + _dg_boundary(a, k, s) + _dg_boundary(b, k, s) + c * np.sum(kp + km, axis=1)
    for y in ys:
        B1, A1 = y - U / 4.0, y + U / 4.0
        diag -= 2.0 * c * (B1 / (B1 * B1 + s * s) - A1 / (A1 * A1 + s * s))
    J[np.arange(nk), np.arange(nk)] = diag
    J[:nk, nk:] = kp - km

    # spin rows
    pa, pb = dc.p_alpha, dc.p_beta
    d = lam[:, None] - lam[None, :]
    p = lam[:, None] + lam[None, :]
    kd = 4.0 * U / (U * U + 4.0 * d * d)
    kpp = 4.0 * U / (U * U + 4.0 * p * p)
    np.fill_diagonal(kd, 0.0)
    kpp_off = kpp.copy()
    np.fill_diagonal(kpp_off, 0.0)
    sdiag = 2.0 * pa / (pa * pa + lam * lam) + 2.0 * pb / (pb * pb + lam * lam)
    sdiag += np.sum(kp + km, axis=0)
    for x in xs:
        F, E = x + U / 4.0, x - U / 4.0
        sdiag += 2.0 * F / (F * F + lam * lam) - 2.0 * E / (E * E + lam * lam)
    sdiag -= np.sum(kd + kpp_off, axis=1)
    for y in ys:
        P, Q = y + U / 2.0, y - U / 2.0
        sdiag -= 2.0 * P / (P * P + lam * lam) - 2.0 * Q / (Q * Q + lam * lam)
    Jss = kd - kpp_off
    Jss[np.arange(nl), np.arange(nl)] = sdiag
    J[nk:, nk:] = Jss
    J[nk:, :nk] = (c[:, None] * (kp - km)).T
    return J


def _string_log_rest(y: float, side_p: float, other_p: float, config: RootConfiguration, U: float, idx: int):
    """log|G| and sign(G) for the spin-string equation (y-p)/(y+p) * G = -1."""
    logmag, sign = 0.0, -1.0  # -1 from the self factor moved to the numerator

    def mul(num, den):
        nonlocal logmag, sign
        logmag += math.log(abs(num)) - math.log(abs(den))
        if (num < 0) != (den < 0):
            sign = -sign

    mul(y - other_p, y + other_p)
    s2 = np.sin(config.k_real) ** 2
    logmag += float(np.sum(np.log(s2 + (y - U / 4.0) ** 2) - np.log(s2 + (y + U / 4.0) ** 2)))
    for x in config.strings.k_strings:
        mul(y + x - U / 4.0, y + x + U / 4.0)
        mul(y - x - U / 4.0, y - x + U / 4.0)
    l2 = np.asarray(config.lambda_real) ** 2
    logmag -= float(np.sum(np.log(l2 + (y - U / 2.0) ** 2) - np.log(l2 + (y + U / 2.0) ** 2)))
    for j, st in enumerate(config.strings.strings):
        if st.kind != "lambda" or j == idx:
            continue
        yo = st.value
        mul(y - yo + U / 2.0, y - yo - U / 2.0)
        mul(y + yo + U / 2.0, y + yo - U / 2.0)
    return logmag, sign


def string_residual(config: RootConfiguration, dc: DerivedConstants, idx: int) -> float:
    """Residual of the product-form spin equation at the imaginary root ``strings[idx]``."""
    st = config.strings.strings[idx]
    p, other = (dc.p_alpha, dc.p_beta) if st.side == "left" else (dc.p_beta, dc.p_alpha)
    y = st.value
    logmag, sign = _string_log_rest(y, p, other, config, dc.U, idx)
    inv = sign * math.exp(-logmag) if logmag > -700 else sign * math.inf
    return (y - p) / (y + p) + inv


# ---------------------------------------------------------------------------
# solver


@dataclass
class SolverOptions:
    tol: float = 1e-12
    max_iter: int = 200
    damping: float = 1.0
    continuation_steps: int = 8
    refine_strings: bool = True
    fd_jacobian: bool = False  # debug path


def _effective_tol(tol: float, N: int) -> float:
    # residuals are O(2 pi N); below a few ulps of that nothing is attainable
    return max(tol, 16.0 * EPS * TWO_PI * N)


def _initial_lambda(J: np.ndarray, N: int, U: float) -> np.ndarray:
    """Invert the bulk spin counting function 2N int_0^lam rho_s at the targets J."""
    from .thermo import spin_counting_fraction

    grid = np.linspace(0.0, 12.0 + 4.0 * U, 4001)
    frac = spin_counting_fraction(grid, U)
    targets = np.clip((np.asarray(J) - 0.25) / (2.0 * N + 2.0), 1e-6, frac[-1] * 0.999)
    out = np.interp(targets, frac, grid)
    return np.maximum(out, 1e-3)


def _precursor_guess(dc, N, qn, strings, k0, lam0):
    """Place the J = 0 root at the first upward zero of its residual.

    lambda = 0 always solves the J = 0 equation trivially; the physical root
    sits where the counting function comes back up through zero.
    """
    grid = np.geomspace(1e-3, 10.0, 400)
    vals = np.empty_like(grid)
    for i, l in enumerate(grid):
        lam = lam0.copy()
        lam[0] = l
        lam[1:] = np.maximum(lam[1:], l + (np.arange(1, len(lam)) * 0.1))
        vals[i] = log_residuals(RootConfiguration(N, k0, lam, strings), dc, qn)[len(k0)]
    up = np.nonzero((vals[:-1] < 0) & (vals[1:] >= 0))[0]
    if not len(up):
        raise BaeConvergenceError("no nontrivial zero for the J = 0 root")
    l0 = grid[up[0]]
    out = lam0.copy()
    out[0] = l0
    out[1:] = np.maximum(out[1:], l0 + np.arange(1, len(out)) * 0.1)
    return out


class _Problem:
    """Packs (real k, real lambda, refined string parts) into one vector."""

    def __init__(self, dc, N, qn, strings, refined_idx):
        self.dc, self.N, self.qn = dc, N, qn
        self.strings = strings
        self.refined_idx = list(refined_idx)
        self.nk, self.nl = len(qn.I), len(qn.J)

    def config(self, x) -> RootConfiguration:
        strs = list(self.strings.strings)
        for j, idx in enumerate(self.refined_idx):
            strs[idx] = replace(strs[idx], value=float(x[self.nk + self.nl + j]))
        return RootConfiguration(self.N, x[: self.nk], x[self.nk : self.nk + self.nl], BoundaryStringSet(tuple(strs)))

    def residual(self, x) -> np.ndarray:
        cfg = self.config(x)
        r = log_residuals(cfg, self.dc, self.qn)
        if self.refined_idx:
            r = np.concatenate([r, [string_residual(cfg, self.dc, idx) for idx in self.refined_idx]])
        return r

    def _p_of(self, i):
        st = self.strings.strings[self.refined_idx[i - self.nk - self.nl]]
        return self.dc.p_alpha if st.side == "left" else self.dc.p_beta

    def jacobian(self, x, r0=None, fd=False) -> np.ndarray:
        n = len(x)
        nreal = self.nk + self.nl
        if fd:
            return _fd_jacobian(self.residual, x, r0)
        Jm = np.zeros((n, n))
        Jm[:nreal, :nreal] = _jacobian_real(self.config(x), self.dc)
        if self.refined_idx:
            if r0 is None:
                r0 = self.residual(x)
            # string rows and columns by forward differences
            for j in range(nreal, n):
                h = 1e-7 * max(1.0, abs(x[j]))
                xp = x.copy()
                xp[j] += h
                Jm[:, j] = (self.residual(xp) - r0) / h
            cfg = self.config(x)
            U = self.dc.U
            s, c = np.sin(cfg.k_real), np.cos(cfg.k_real)
            lam = np.asarray(cfg.lambda_real)
            for i in range(nreal, n):
                y = x[i]
                # residual = (y-p)/(y+p) + inv with inv = e^{-log|G|} sign(G)
                inv = r0[i] - (y - self._p_of(i)) / (y + self._p_of(i))
                dk = 2.0 * s * c * (1.0 / (s * s + (y - U / 4.0) ** 2) - 1.0 / (s * s + (y + U / 4.0) ** 2))
                dl = -2.0 * lam * (1.0 / (lam * lam + (y - U / 2.0) ** 2) - 1.0 / (lam * lam + (y + U / 2.0) ** 2))
                Jm[i, : self.nk] = -inv * dk
                Jm[i, self.nk : nreal] = -inv * dl
        return Jm


def _fd_jacobian(fun, x, r0=None):
    if r0 is None:
        r0 = fun(x)
    Jm = np.empty((len(r0), len(x)))
    for j in range(len(x)):
        h = 1e-7 * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        Jm[:, j] = (fun(xp) - r0) / h
    return Jm


def _admissible(prob: _Problem, x) -> bool:
    nk, nl = prob.nk, prob.nl
    k, lam, ys = x[:nk], x[nk : nk + nl], x[nk + nl :]
    if not np.all(np.isfinite(x)):
        return False
    if nk and (np.any(k <= 0) or np.any(k >= math.pi)):
        return False
    if nl and np.any(lam <= 0):
        return False
    for j, idx in enumerate(prob.refined_idx):
        p0 = prob.strings.strings[idx].value
        if ys[j] * p0 <= 0:
            return False
    return True


def _newton(prob: _Problem, x0, opts: SolverOptions, offset=None):
    """Damped Newton on residual(x) - offset; step halved while the residual grows."""
    x = np.array(x0, dtype=float)
    tol = _effective_tol(opts.tol, prob.N)
    fun = prob.residual if offset is None else (lambda z: prob.residual(z) - offset)
    r = fun(x)
    rn = np.max(np.abs(r)) if len(r) else 0.0
    it = 0
    for it in range(1, opts.max_iter + 1):
        if rn < tol:
            return x, rn, it - 1, True
        Jm = prob.jacobian(x, r if offset is None else r + offset, fd=opts.fd_jacobian)
        try:
            step = np.linalg.solve(Jm, -r)
        except np.linalg.LinAlgError:
            break
        t = opts.damping
        while t > 1e-6:
            xn = x + t * step
            if _admissible(prob, xn):
                rn_new_vec = fun(xn)
                rn_new = np.max(np.abs(rn_new_vec))
                if np.isfinite(rn_new) and rn_new < rn:
                    break
            t *= 0.5
        else:
            break
        x, r, rn = xn, rn_new_vec, rn_new
    return x, rn, it, rn < tol


def _solve_pattern(dc, N, qn, strings, refined_idx, opts, guess=None):
    prob = _Problem(dc, N, qn, strings, refined_idx)
    if guess is None:
        k0 = math.pi * (qn.I + 0.5) / (N + 1)
        lam0 = _initial_lambda(qn.J, N, dc.U)
        if len(qn.J) and qn.J[0] == 0:
            lam0 = _precursor_guess(dc, N, qn, strings, k0, lam0)
        y0 = [strings.strings[i].value for i in refined_idx]
        guess = np.concatenate([k0, lam0, y0])

    # pinned strings first, then release the refined ones
    pinned = _Problem(dc, N, qn, strings, [])
    nreal = prob.nk + prob.nl
    xr, rn, its, ok = _newton(pinned, guess[:nreal], opts)
    if not ok:
        # Newton homotopy: follow residual(x) = (1 - t) residual(x0)
        x = guess[:nreal].copy()
        r0 = pinned.residual(x)
        steps = max(1, opts.continuation_steps)
        for t in np.linspace(0.0, 1.0, steps + 1)[1:]:
            x, rn, its, ok = _newton(pinned, x, opts, offset=(1.0 - t) * r0)
        xr = x
    if not ok:
        raise BaeConvergenceError(f"pinned-string solve failed (residual {rn:.3e})", rn)
    if not refined_idx:
        return prob, xr, rn, its
    y0 = np.array([strings.strings[i].value for i in refined_idx])
    # a string sitting exactly on the other boundary's zero (alpha = beta)
    # starts from the pole of its residual; nudge it off
    for j, i in enumerate(refined_idx):
        other = dc.p_beta if strings.strings[i].side == "left" else dc.p_alpha
        if abs(y0[j] - other) < 1e-9 * max(1.0, abs(other)):
            y0[j] *= 1.0 + 1e-3
    x0 = np.concatenate([xr, y0])
    x, rn, its2, ok = _newton(prob, x0, opts)
    if not ok:
        raise BaeConvergenceError(f"string refinement failed (residual {rn:.3e})", rn)
    return prob, x, rn, its + its2


def _check_distinct(prob: _Problem, x, min_gap=1e-10):
    nk, nl = prob.nk, prob.nl
    k, lam = x[:nk], x[nk : nk + nl]
    if nk > 1 and np.min(np.diff(k)) < min_gap:
        raise RootCollisionError("charge roots collided")
    if nl > 1 and np.min(np.diff(lam)) < min_gap:
        raise RootCollisionError("spin roots collided")
    if nl and np.min(lam) < min_gap:
        raise RootCollisionError("spin root collapsed onto zero")
    ys = x[nk + nl :]
    if len(ys) and np.min(np.abs(ys)) < min_gap:
        raise RootCollisionError("boundary string collapsed onto the real axis")
    all_y = np.array(prob.config(x).strings.lambda_strings)
    if len(all_y) > 1 and np.min(np.abs(np.diff(np.sort(all_y)))) < min_gap:
        raise RootCollisionError("boundary strings collided")


def _patterns(dc: DerivedConstants):
    """Candidate ground-state patterns: every intermediate boundary either carries
    its spin string or, at small N, its real precursor root with J = 0."""
    strings = dc.strings.strings
    inter = [i for i, s in enumerate(strings) if s.kind == "lambda" and _is_intermediate(dc, s)]
    yield "strings", strings, inter, False
    for i in inter:
        kept = tuple(s for j, s in enumerate(strings) if j != i)
        refined = [j for j, s in enumerate(kept) if s.kind == "lambda" and _is_intermediate(dc, s)]
        yield f"precursor-{strings[i].side}", kept, refined, True


def _is_intermediate(dc, s: BoundaryString) -> bool:
    cls = dc.left_class if s.side == "left" else dc.right_class
    return cls is BoundaryClass.INTERMEDIATE


def solve(dc: DerivedConstants, N: int, options: SolverOptions | None = None) -> BaeSolution:
    """Ground state of the reduced equations at half filling (M = N/2).

    Every candidate pattern is solved and the lowest admissible energy wins.
    """
    opts = options or SolverOptions()
    if N < 2 or N % 2:
        raise ValueError(f"N must be even and >= 2, got {N}")
    best, errors = None, []
    for name, strs, refined, precursor in _patterns(dc):
        sset = BoundaryStringSet(tuple(strs))
        n_k = len(sset.k_strings)
        n_l = len(sset.lambda_strings)
        if n_l > N // 2 or n_k > N:
            continue
        qn = ground_state_quantum_numbers(N, n_k, n_l)
        if precursor:
            if len(qn.J) == 0:
                continue
            qn = QuantumNumbers(qn.I, np.concatenate([[0.0], qn.J[:-1]]))
        if not opts.refine_strings:
            refined = []
        try:
            prob, x, rn, its = _solve_pattern(dc, N, qn, sset, refined, opts)
            _check_distinct(prob, x)
        except BaeConvergenceError as exc:
            errors.append((name, exc))
            continue
        except (ValueError, ZeroDivisionError, FloatingPointError, np.linalg.LinAlgError) as exc:
            errors.append((name, BaeConvergenceError(f"{type(exc).__name__}: {exc}")))
            continue
        cfg = prob.config(x)
        E = energy_from_roots(cfg)
        sol = BaeSolution(cfg, qn, float(rn), E, its, True, name, dc.U, dc.alpha, dc.beta, str(dc.region))
        log.debug("N=%d pattern %s: E=%.12f residual %.2e", N, name, E, rn)
        if best is None or E < best.E_hom - 1e-12:
            best = sol
    if best is None:
        worst = min((e.best_residual for _, e in errors), default=math.inf)
        if errors and all(isinstance(e, RootCollisionError) for _, e in errors):
            raise RootCollisionError("; ".join(f"{n}: {e}" for n, e in errors), worst)
        raise BaeConvergenceError("; ".join(f"{n}: {e}" for n, e in errors) or "no admissible pattern", worst)
    return best


def solve_parallel(U: float, alpha: float, beta: float, N: int, options: SolverOptions | None = None) -> BaeSolution:
    return solve(constants_from_magnitudes(U, alpha, beta), N, options)


@dataclass
class StringReport:
    side: str
    kind: str
    value: float
    boundary_numerator: float
    bulk_product: float
    log_bulk_product: float


def verify_strings(sol: BaeSolution, dc: DerivedConstants) -> list[StringReport]:
    """Vanishing boundary numerator and the magnitude of the bulk product at each spin string.

    The bulk product over real momenta of
    (lam + s + iU/4)(lam - s + iU/4) / ((lam + s - iU/4)(lam - s - iU/4))
    shrinks as N grows, which is what lets the string balance the zero.
    """
    out = []
    U = dc.U
    s = np.sin(sol.roots.k_real)
    for st in dc.strings.strings:
        if st.kind != "lambda":
            continue
        lam = 1j * st.value
        strong = (dc.right_class if st.side == "right" else dc.left_class) is BoundaryClass.STRONG
        # intermediate strings null p + (lam - eta/2) beta (resp. q - (lam - eta/2) alpha);
        # strong ones null the partner factor shifted by eta
        if st.side == "right":
            num = dc.p - (lam + dc.eta / 2) * dc.beta if strong else dc.p + (lam - dc.eta / 2) * dc.beta
        else:
            num = dc.q + (lam + dc.eta / 2) * dc.alpha if strong else dc.q - (lam - dc.eta / 2) * dc.alpha
        y = st.value
        logp = float(np.sum(np.log(s * s + (y + U / 4.0) ** 2) - np.log(s * s + (y - U / 4.0) ** 2)))
        if y > 0:
            # a string in the upper half plane is balanced by the inverse product
            logp = -logp
        out.append(StringReport(st.side, st.kind, y, float(abs(num)), math.exp(logp), logp))
    return out


def solve_region_sweep(U, alpha, beta, Ns, options=None):
    return {N: solve_parallel(U, alpha, beta, N, options) for N in Ns}


__all__ = [
    "BaeConvergenceError",
    "BaeSolution",
    "QuantumNumbers",
    "Region",
    "RootCollisionError",
    "RootConfiguration",
    "SolverOptions",
    "energy_from_roots",
    "ground_state_quantum_numbers",
    "log_residuals",
    "solve",
    "solve_parallel",
    "string_residual",
    "verify_strings",
]
