"""Thermodynamic-limit densities, bulk energy and surface energy.

Fourier convention: f~(w) = int e^{i w x} f(x) dx.  The Lorentzian
(1/pi) p/(p^2 + x^2) transforms to sign(p) e^{-|p||w|}.

Each boundary contributes to the spin-sector source term independently
(p = (1-h^2)/(2h) - U/4, x = (h^2-1)/(2h)):

  weak          e^{-p|w|}
  intermediate  -e^{p|w|} - e^{-(U/2+p)|w|} - e^{-(U/2-p)|w|}
  strong        -e^{-(x+3U/4)|w|}

and a strong boundary also carries the bound charge state of energy
-2 sqrt(1 + x^2).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.integrate as si
import scipy.special as ss

from .model import BoundaryClass, DerivedConstants, Region

log = logging.getLogger(__name__)

# The formal e^{+-i w oo} terms of the density equations only produce
# delta functions at lambda = +-oo; they are dropped from every integral.
DROP_INFINITY_TERMS = True

TAIL_EPS = 1e-15
K_POINTS = 256
GL_THETA = 96
BULK_HEAD = 200.0  # adaptive quad up to here, fixed panels beyond


class Order(enum.Enum):
    LEADING = "leading"
    ONE_OVER_N = "one-over-N"


class SurfaceForm(enum.Enum):
    DERIVED = "derived"  # from the counting functions, checked against finite N
    PRINTED = "printed"  # literal case lists, kept for comparison


class QuadratureError(RuntimeError):
    def __init__(self, term: str, msg: str):
        super().__init__(f"{term}: {msg}")
        self.term = term


# ---------------------------------------------------------------------------
# kernels


def bessel_kernels(omega: float, n: int | None = None) -> tuple[float, float]:
    """J0 and J1 from their angular integrals (periodic trapezoid rule)."""
    w = abs(float(omega))
    if n is None:
        n = 64 + 2 * int(w)
    k = 2.0 * math.pi * np.arange(n) / n
    s, c = np.sin(k), np.cos(k)
    J0 = float(np.mean(np.cos(w * s)))
    J1 = float(w * np.mean(c * c * np.cos(w * s)))
    return J0, (J1 if omega >= 0 else -J1)


def a_n(x, n: float, U: float):
    """(1/pi) 4nU / (n^2 U^2 + 16 x^2); unit weight on the real line."""
    return (4.0 * n * U / math.pi) / (n * n * U * U + 16.0 * np.asarray(x) ** 2)


def b_kernel(k, h: float):
    B = (1.0 - h * h) / (1.0 + h * h)
    s, c = np.sin(k), np.cos(k)
    return -(1.0 / (2.0 * math.pi)) * B / (s * s + B * B * c * c)


def d_kernel(k, h: float):
    return (1.0 / (2.0 * math.pi)) * 2.0 * h * (h * h - 1.0) * np.cos(k) / ((h * h - 1.0) ** 2 + (2.0 * h * np.sin(k)) ** 2)


def lorentz_cos(k, y: float):
    """(1/pi) y cos k / (y^2 + sin^2 k); the b01/b02 shape."""
    return (1.0 / math.pi) * y * np.cos(k) / (y * y + np.sin(k) ** 2)


def _cos2_lorentz_integral(y: float) -> float:
    """int_{-pi}^{pi} cos k * lorentz_cos(k, y) dk in closed form."""
    if y == 0:
        return 0.0
    return 2.0 * math.copysign(1.0, y) * (math.sqrt(1.0 + y * y) - abs(y))


def _u_tilde(h, U):
    return U + (2.0 * h * h - 2.0) / h


def _u01(h, U):
    return U + (2.0 - 2.0 * h * h) / h


def _u02(h, U):
    return -3.0 * U + (2.0 - 2.0 * h * h) / h


@dataclass(frozen=True)
class Exponential:
    """coef * e^{rate |w|}"""

    coef: float
    rate: float


@dataclass
class KernelTable:
    U: float
    alpha: float
    beta: float
    U_tilde_alpha: float
    U_tilde_beta: float
    U01: dict
    U02: dict
    lambda0: float | None
    lambda01: float | None
    lambda02: float | None
    f1_terms: list[Exponential] = field(default_factory=list)
    f2_strings: list[float] = field(default_factory=list)
    bound_states: list[float] = field(default_factory=list)

    def a(self, n, x):
        return a_n(x, n, self.U)

    def b_alpha(self, k):
        return b_kernel(k, self.alpha)

    def b_beta(self, k):
        return b_kernel(k, self.beta)

    def d_alpha(self, k):
        return d_kernel(k, self.alpha)

    def d_beta(self, k):
        return d_kernel(k, self.beta)

    def f1(self, omega):
        w = np.abs(np.asarray(omega, float))
        return sum(t.coef * np.exp(t.rate * w) for t in self.f1_terms) if self.f1_terms else np.zeros_like(w)

    def f2(self, k):
        k = np.asarray(k, float)
        out = np.zeros_like(k)
        for y in self.f2_strings:
            out += lorentz_cos(k, y + self.U / 4.0) - lorentz_cos(k, y - self.U / 4.0)
        return out


def _side_terms(h: float, cls: BoundaryClass, U: float):
    p = (1.0 - h * h) / (2.0 * h) - U / 4.0
    if cls is BoundaryClass.WEAK:
        return [Exponential(1.0, -p)], [], []
    if cls is BoundaryClass.INTERMEDIATE:
        return [Exponential(-1.0, p), Exponential(-1.0, -(U / 2.0 + p)), Exponential(-1.0, -(U / 2.0 - p))], [p], []
    x = (h * h - 1.0) / (2.0 * h)
    return [Exponential(-1.0, -(x + 0.75 * U))], [x + U / 4.0], [x]


def _printed_terms(dc: DerivedConstants):
    """Literal case lists (regions with the weaker field on the left)."""
    U = dc.U
    a, b = sorted((dc.alpha, dc.beta)) if dc.region in (Region.II, Region.IV) else (dc.alpha, dc.beta)
    Ua, Ub = _u_tilde(a, U), _u_tilde(b, U)
    lam0 = (1.0 - b * b) / (2.0 * b) - U / 4.0
    lam01 = (a * a - 1.0) / (2.0 * a) + U / 4.0
    lam02 = (b * b - 1.0) / (2.0 * b) + U / 4.0
    r = dc.region
    if r is Region.I:
        return [Exponential(1.0, Ub / 4), Exponential(1.0, Ua / 4)], []
    if r is Region.II:
        f1 = [Exponential(-1.0, -Ub / 4), Exponential(1.0, Ua / 4), Exponential(-1.0, -_u01(b, U)), Exponential(-1.0, _u02(b, U))]
        return f1, [lam0]
    if r is Region.III:
        f1 = [Exponential(-1.0, -Ub / 4), Exponential(-1.0, -Ua / 4)]
        f1 += [Exponential(-1.0, -_u01(a, U)), Exponential(-1.0, _u02(a, U))]
        f1 += [Exponential(-1.0, -_u01(b, U)), Exponential(-1.0, _u02(b, U))]
        # the b01/b02 pair of region III is written with the strong-field
        # positions; here both strings sit at the intermediate offsets
        pa = (1.0 - a * a) / (2.0 * a) - U / 4.0
        return f1, [pa, lam0]
    if r is Region.IV:
        return [Exponential(1.0, Ua / 4), Exponential(-1.0, _u02(b, U))], [lam0]
    return [Exponential(-1.0, _u02(a, U)), Exponential(-1.0, _u02(b, U))], [lam01, lam02]


def kernel_table(dc: DerivedConstants, form: SurfaceForm = SurfaceForm.DERIVED) -> KernelTable:
    U, a, b = dc.U, dc.alpha, dc.beta
    lam0 = lam01 = lam02 = None
    if dc.right_class is BoundaryClass.INTERMEDIATE:
        lam0 = (1.0 - b * b) / (2.0 * b) - U / 4.0
    if dc.left_class is BoundaryClass.STRONG:
        lam01 = (a * a - 1.0) / (2.0 * a) + U / 4.0
    if dc.right_class is BoundaryClass.STRONG:
        lam02 = (b * b - 1.0) / (2.0 * b) + U / 4.0
    kt = KernelTable(
        U, a, b, _u_tilde(a, U), _u_tilde(b, U),
        {"alpha": _u01(a, U), "beta": _u01(b, U)},
        {"alpha": _u02(a, U), "beta": _u02(b, U)},
        lam0, lam01, lam02,
    )
    if form is SurfaceForm.DERIVED:
        for h, cls in ((a, dc.left_class), (b, dc.right_class)):
            f1, strs, bound = _side_terms(h, cls, U)
            kt.f1_terms += f1
            kt.f2_strings += strs
            kt.bound_states += bound
    else:
        kt.f1_terms, kt.f2_strings = _printed_terms(dc)
        kt.bound_states = []
    for t in kt.f1_terms:
        if not t.rate < 0:
            raise ValueError(f"f1 exponent {t.rate:.6g} is not negative in region {dc.region} ({form.value} form)")
    return kt


def f1(omega, region: Region, dc: DerivedConstants, form: SurfaceForm = SurfaceForm.DERIVED):
    if region is not dc.region:
        raise ValueError(f"region {region} does not match constants (region {dc.region})")
    return kernel_table(dc, form).f1(omega)


def f2(k, region: Region, dc: DerivedConstants, form: SurfaceForm = SurfaceForm.DERIVED):
    if region is not dc.region:
        raise ValueError(f"region {region} does not match constants (region {dc.region})")
    return kernel_table(dc, form).f2(k)


# ---------------------------------------------------------------------------
# bulk


def _cutoff(rate: float, eps: float = TAIL_EPS) -> float:
    """Smallest w with e^{-rate w} < eps."""
    return -math.log(eps) / rate


def _bulk_integrand(w, U):
    w = np.asarray(w, float)
    with np.errstate(over="ignore"):
        fermi = 1.0 / (1.0 + np.exp(U * w / 2.0))
    safe = np.where(w == 0, 1.0, w)
    ratio = np.where(w == 0, 0.5, ss.j1(safe) / safe)
    return ss.j0(w) * ratio * fermi


def bulk_energy_density(U: float, method: str = "quad") -> float:
    """Ground-state energy per site of the infinite chain at half filling.

    ``method="quad"`` integrates the J0 J1 / (w (1 + e^{Uw/2})) form
    adaptively; ``method="kspace"`` evaluates -2 int cos^2 k R(sin k) dk on
    a periodic grid with R built by Gauss-Legendre panels.  U = 0 uses
    int_0^oo J0 J1 / w = 2/pi.
    """
    if U < 0:
        raise ValueError("U must be non-negative")
    if U == 0:
        return -4.0 / math.pi
    Om = _cutoff(U / 2.0)
    if method == "quad":
        head = min(Om, BULK_HEAD)
        val, err = si.quad(_bulk_integrand, 0.0, head, args=(U,), limit=2000, epsabs=1e-14, epsrel=1e-13)
        if Om > head:
            # small U: the J0 J1 / w^2 tail is long but smooth on quarter periods
            w, wt = _gl_panels(head, Om, panels=int((Om - head) / (0.5 * math.pi)) + 1, order=12)
            val += float(np.sum(_bulk_integrand(w, U) * wt))
        return -4.0 * val
    if method == "kspace":
        k = 2.0 * math.pi * np.arange(K_POINTS) / K_POINTS - math.pi
        s = np.sin(k)
        w, wt = _gl_panels(0.0, Om, panels=max(64, int(Om)), order=24)
        with np.errstate(over="ignore"):
            fw = ss.j0(w) * wt / (1.0 + np.exp(U * w / 2.0))
        R = np.zeros_like(s)
        for i0 in range(0, len(w), 4096):
            R += np.cos(np.outer(s, w[i0 : i0 + 4096])) @ fw[i0 : i0 + 4096]
        R /= math.pi
        return float(-2.0 * np.mean(np.cos(k) ** 2 * R) * 2.0 * math.pi)
    raise ValueError(f"unknown method {method!r}")


def _gl_panels(a: float, b: float, panels: int, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (mid + half * x).ravel(), (half * w).ravel()


# ---------------------------------------------------------------------------
# densities (region I)


@dataclass
class DensityProfile:
    rho_c: Callable
    rho_s: Callable
    order: Order
    N: int | None = None


def spin_counting_fraction(lam, U: float):
    """int_0^lam rho_s at leading order (rises to 1/4)."""
    lam = np.atleast_1d(np.asarray(lam, float))
    Om = _cutoff(U / 4.0)
    w, wt = _gl_panels(0.0, Om, panels=max(32, int(Om)), order=16)
    weight = ss.j0(w) / (2.0 * np.cosh(U * w / 4.0)) / w * wt
    return (np.sin(np.outer(lam, w)) * weight).sum(axis=1) / math.pi


def _omega_grid(U: float):
    Om = _cutoff(U / 4.0)
    return _gl_panels(0.0, Om, panels=max(64, int(2 * Om)), order=20)


def _b_tilde(w, h: float):
    """int e^{i w sin k} b_h(k) dk by the periodic trapezoid rule."""
    B = abs((1.0 - h * h) / (1.0 + h * h))
    n = max(K_POINTS, int(64.0 / max(B, 1e-6)))
    n += n % 2
    k = 2.0 * math.pi * np.arange(n) / n
    bk = b_kernel(k, h)
    out = np.empty(len(w))
    for i0 in range(0, len(w), 256):
        ww = w[i0 : i0 + 256]
        out[i0 : i0 + 256] = np.cos(np.outer(ww, np.sin(k))) @ bk * (2.0 * math.pi / n)
    return out


def densities(dc: DerivedConstants, order: Order = Order.LEADING, N: int | None = None) -> DensityProfile:
    """Root densities on [-pi, pi] and the real line (region I only).

    With ``order=ONE_OVER_N`` the boundary corrections are added with weight
    1/(2N); the holes at k = 0, +-pi and lambda = 0 are left out.
    """
    if dc.region is not Region.I:
        raise ValueError("densities are only available in region I")
    U = dc.U
    w, wt = _omega_grid(U)
    ch = 2.0 * np.cosh(U * w / 4.0)
    lead_s = ss.j0(w) / ch
    lead_c = np.exp(-U * w / 4.0) * ss.j0(w) / ch
    corr_s = corr_c = None
    if order is Order.ONE_OVER_N:
        if N is None:
            raise ValueError("N is required for the 1/N densities")
        kt = kernel_table(dc)
        G = -_b_tilde(w, dc.alpha) - _b_tilde(w, dc.beta)
        em = np.exp(-U * w / 4.0)
        src = em * (G - 2.0) + em + kt.f1(w)
        corr_s = (src + np.exp(-U * w / 2.0)) / (1.0 + np.exp(-U * w / 2.0))
        corr_c = (em * (G - 1.0) - 1.0 + kt.f1(w)) / ch

    def inv(F, x, kind):
        # 1/(2 pi) int_R e^{-i w x} F(|w|) dw for even F
        x = np.atleast_1d(np.asarray(x, float))
        return (np.cos(np.outer(x, w)) @ (F * wt)) / math.pi

    def rho_s(lam):
        out = inv(lead_s, lam, "s")
        if corr_s is not None:
            out = out + inv(corr_s, lam, "s") / (2.0 * N)
        return out

    def rho_c(k):
        k = np.atleast_1d(np.asarray(k, float))
        out = 1.0 / (2.0 * math.pi) + np.cos(k) * inv(lead_c, np.sin(k), "c")
        if corr_c is not None:
            smooth = -b_kernel(k, dc.alpha) - b_kernel(k, dc.beta) + d_kernel(k, dc.alpha) + d_kernel(k, dc.beta)
            out = out + (smooth + np.cos(k) * inv(corr_c, np.sin(k), "c")) / (2.0 * N)
        return out

    return DensityProfile(rho_c, rho_s, order, N)


# ---------------------------------------------------------------------------
# surface energy


@dataclass
class SurfaceEnergyResult:
    e_b: float
    region: Region
    term_breakdown: tuple[float, float, float, float, float]
    quadrature_error: float
    form: SurfaceForm = SurfaceForm.DERIVED
    U: float = float("nan")
    alpha: float = float("nan")
    beta: float = float("nan")


def _k_kernel(s: np.ndarray, U: float, literal: bool):
    """int_R J1(w)/w cos(w s) / (1 + e^{U|w|/2}) dw for each s.

    With ``literal`` the Fermi factor reads 1/(1 + e^{U w/2}), whose even part is 1/2.
    """
    if literal:
        # 2 * int_0^oo J1/w cos(ws) * 1/2 ; closed form for |s| <= 1
        return np.sqrt(1.0 - np.clip(s * s, 0.0, 1.0)), np.zeros_like(s)
    Om = _cutoff(U / 2.0)

    def f(w):
        if w == 0:
            return np.full_like(s, 0.5)
        return 2.0 * ss.j1(w) / w * np.cos(w * s) / (1.0 + math.exp(U * w / 2.0))

    val, err = si.quad_vec(f, 0.0, Om, epsabs=1e-14, epsrel=1e-12, limit=4000)
    return val, err


def surface_energy(dc: DerivedConstants, form: SurfaceForm = SurfaceForm.DERIVED) -> SurfaceEnergyResult:
    """O(1) part of the half-filled ground energy, split into five groups.

    1. boundary b-kernels against the bulk Fermi kernel
    2. the constant 2 against the same kernel
    3. the cosh-kernel group (e^{-U|w|/4} - 1 + f1)
    4. -int cos k (d_alpha + d_beta) dk
    5. -int cos k f2 dk, plus -2 sqrt(1 + x^2) per bound charge state
    """
    U = dc.U
    kt = kernel_table(dc, form)
    literal = form is SurfaceForm.PRINTED
    errs = []

    # groups 1 and 2 share the kernel K(s).  With t = tan k and t = B tan(theta)
    # the b-kernel becomes a flat weight, -sign(B)/pi dtheta, for any width B.
    th, thw = np.polynomial.legendre.leggauss(GL_THETA)
    th = 0.25 * math.pi * (th + 1.0)
    thw = 0.25 * math.pi * thw
    Bs = [(1.0 - h * h) / (1.0 + h * h) for h in (dc.alpha, dc.beta)]
    s_nodes = [B * np.sin(th) / np.sqrt(np.cos(th) ** 2 + (B * np.sin(th)) ** 2) for B in Bs]
    K, Kerr = _k_kernel(np.concatenate(s_nodes + [[0.0]]), U, literal)
    Kerr = float(np.max(np.abs(Kerr)))
    K0 = float(K[-1])
    term1 = 0.0
    for j, B in enumerate(Bs):
        Kj = K[j * GL_THETA : (j + 1) * GL_THETA]
        term1 -= math.copysign(1.0, B) * 2.0 / math.pi * float(np.sum(Kj * thw))
    term2 = 2.0 * K0
    errs.append(Kerr * 4.0)

    # group 3
    Om = max(_cutoff(U / 4.0), 1.0)

    def g3(w):
        if w == 0:
            return 0.0
        bracket = math.exp(-U * w / 4.0) - 1.0 + float(kt.f1(w))
        return ss.j1(w) / w * bracket / (2.0 * math.cosh(U * w / 4.0))

    v3, e3 = si.quad(g3, 0.0, Om, limit=4000, epsabs=1e-14, epsrel=1e-12)
    term3 = -2.0 * v3
    errs.append(2.0 * e3)

    # group 4: closed form of -int cos k d_h dk
    term4 = 0.0
    for h in (dc.alpha, dc.beta):
        A = (h * h - 1.0) / (2.0 * h)
        term4 -= math.copysign(1.0, A) * (math.sqrt(1.0 + A * A) - abs(A))

    # group 5
    term5 = 0.0
    for y in kt.f2_strings:
        term5 -= _cos2_lorentz_integral(y + U / 4.0) - _cos2_lorentz_integral(y - U / 4.0)
    for x in kt.bound_states:
        term5 -= 2.0 * math.sqrt(1.0 + x * x)

    terms = (term1, term2, term3, term4, term5)
    if not all(math.isfinite(t) for t in terms):
        bad = [i + 1 for i, t in enumerate(terms) if not math.isfinite(t)]
        raise QuadratureError(f"term_{bad[0]}", "non-finite value")
    return SurfaceEnergyResult(float(sum(terms)), dc.region, terms, float(sum(errs)), form, U, dc.alpha, dc.beta)


def surface_energy_rows(results) -> list[dict]:
    rows = []
    for r in results:
        row = {"U": r.U, "alpha": r.alpha, "beta": r.beta, "region": str(r.region), "e_b": r.e_b}
        for i, t in enumerate(r.term_breakdown, 1):
            row[f"term_{i}"] = t
        row["quad_error"] = r.quadrature_error
        rows.append(row)
    return rows
