import math

import numpy as np
import pytest
import scipy.integrate as si
import scipy.special as ss
from hypothesis import given, settings, strategies as st

from hubbard_surface import Region, constants_from_magnitudes, critical_field
from hubbard_surface import thermo
from hubbard_surface.thermo import (
    Order,
    SurfaceForm,
    a_n,
    bessel_kernels,
    bulk_energy_density,
    densities,
    f1,
    f2,
    kernel_table,
    surface_energy,
)

U = 1.3


def test_bessel_kernels_known_values():
    J0, J1 = bessel_kernels(1.0)
    assert J0 == pytest.approx(0.7651976866, abs=1e-10)
    assert J1 == pytest.approx(0.4400505857, abs=1e-10)


@given(st.floats(-60.0, 60.0))
def test_bessel_kernels_match_scipy_and_parity(w):
    J0, J1 = bessel_kernels(w)
    assert J0 == pytest.approx(ss.j0(w), abs=1e-13)
    assert J1 == pytest.approx(ss.j1(w), abs=1e-13)
    assert bessel_kernels(-w) == pytest.approx((J0, -J1), abs=1e-15)


def test_bessel_series():
    # J1(x) = sum (-1)^m (x/2)^{2m+1} / (m! (m+1)!)
    x = 2.5
    series = sum((-1) ** m * (x / 2) ** (2 * m + 1) / (math.factorial(m) * math.factorial(m + 1)) for m in range(30))
    assert bessel_kernels(x)[1] == pytest.approx(series, abs=1e-13)


def test_bulk_free_limit():
    assert bulk_energy_density(0.0) == pytest.approx(-4 / math.pi, abs=1e-15)
    # first order in U is the Hartree shift U/4
    for u in (1e-3, 1e-2):
        assert bulk_energy_density(u) == pytest.approx(-4 / math.pi + u / 4, abs=2 * u * u)
    assert bulk_energy_density(1e-2, "kspace") == pytest.approx(bulk_energy_density(1e-2), abs=1e-9)


@pytest.mark.parametrize("u", [0.5, 1.3, 4.0, 10.0])
def test_bulk_two_schemes(u):
    assert bulk_energy_density(u, "quad") == pytest.approx(bulk_energy_density(u, "kspace"), abs=1e-10)


def test_bulk_monotone_and_strong_coupling():
    us = [0.2, 0.5, 1.0, 1.3, 2.0, 4.0, 8.0]
    e = [bulk_energy_density(u) for u in us]
    assert all(b > a for a, b in zip(e, e[1:]))
    # large U: -4 ln 2 / U
    assert bulk_energy_density(100.0) == pytest.approx(-4 * math.log(2) / 100.0, rel=1e-3)


def test_bulk_rejects_bad_input():
    with pytest.raises(ValueError):
        bulk_energy_density(-1.0)
    with pytest.raises(ValueError):
        bulk_energy_density(1.0, method="simpson")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_a_n_normalized(n):
    val, _ = si.quad(lambda x: a_n(x, n, U), -np.inf, np.inf)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_f1_f2_examples():
    dc = constants_from_magnitudes(U, 0.13, 0.45)
    assert f1(0.0, Region.I, dc) == pytest.approx(2.0)
    assert np.all(f2(np.linspace(-3, 3, 7), Region.I, dc) == 0)
    dc = constants_from_magnitudes(U, 0.13, 1.5)
    assert f1(0.0, Region.IV, dc) == pytest.approx(0.0)
    with pytest.raises(ValueError, match="does not match"):
        f1(0.0, Region.II, dc)


@pytest.mark.parametrize("a,b", [(0.13, 0.45), (0.13, 0.88), (0.84, 0.85), (0.76, 1.33), (0.13, 1.33), (1.03, 1.35)])
def test_f1_decays(a, b):
    kt = kernel_table(constants_from_magnitudes(U, a, b))
    assert all(t.rate < 0 for t in kt.f1_terms)
    assert abs(kt.f1(2000.0)) < 1e-12


def test_printed_form_rejects_growing_terms():
    # region IV with an intermediate left field
    with pytest.raises(ValueError, match="not negative"):
        kernel_table(constants_from_magnitudes(U, 0.76, 1.33), SurfaceForm.PRINTED)


def test_f2_integrates_to_zero_per_string():
    dc = constants_from_magnitudes(U, 0.13, 0.88)
    k = np.linspace(-math.pi, math.pi, 20001)
    v = f2(k, Region.II, dc)
    assert np.all(np.isfinite(v))
    assert np.trapezoid(v, k) == pytest.approx(0.0, abs=1e-10)


def test_leading_densities_normalized_and_even():
    D = densities(constants_from_magnitudes(U, 0.13, 0.45))
    k = np.linspace(-math.pi, math.pi, 4097)[:-1]
    assert np.mean(D.rho_c(k)) * 2 * math.pi == pytest.approx(1.0, abs=1e-10)
    assert D.rho_c(k[1:]) == pytest.approx(D.rho_c(-k[1:])[:], abs=1e-14)
    lam = np.linspace(0, 12, 24001)
    r = D.rho_s(lam)
    assert 2 * np.trapezoid(r, lam) == pytest.approx(0.5, abs=1e-9)
    assert D.rho_s([-1.3]) == pytest.approx(D.rho_s([1.3]), abs=1e-15)
    assert np.all(r[lam < 6] > 0)


def test_densities_region_guard():
    with pytest.raises(ValueError, match="region I"):
        densities(constants_from_magnitudes(U, 0.13, 0.88))
    with pytest.raises(ValueError, match="N is required"):
        densities(constants_from_magnitudes(U, 0.13, 0.45), Order.ONE_OVER_N)


def test_one_over_n_density_improves_histogram():
    from hubbard_surface.bae import solve

    dc = constants_from_magnitudes(U, 0.13, 0.45)
    N = 256
    kk = solve(dc, N).roots.k_real
    mid = 0.5 * (kk[1:] + kk[:-1])
    emp = 1.0 / (2 * N * np.diff(kk))
    lead = np.max(np.abs(emp - densities(dc).rho_c(mid)))
    corr = np.max(np.abs(emp - densities(dc, Order.ONE_OVER_N, N).rho_c(mid)))
    assert corr < 0.5 * lead


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 0.7), st.floats(0.05, 0.7))
def test_surface_energy_symmetric_region_one(a, b):
    e1 = surface_energy(constants_from_magnitudes(U, a, b)).e_b
    e2 = surface_energy(constants_from_magnitudes(U, b, a)).e_b
    assert e1 == pytest.approx(e2, abs=1e-10)


@pytest.mark.parametrize("a,b", [(0.8, 0.95), (1.2, 2.5), (0.13, 0.88), (0.13, 1.6)])
def test_surface_energy_symmetric(a, b):
    e1 = surface_energy(constants_from_magnitudes(U, a, b)).e_b
    e2 = surface_energy(constants_from_magnitudes(U, b, a)).e_b
    assert e1 == pytest.approx(e2, abs=1e-10)


@pytest.mark.parametrize("edge", [critical_field(U), 1.0])
def test_surface_energy_continuous(edge):
    d = 1e-7
    lo = surface_energy(constants_from_magnitudes(U, 0.13, edge - d)).e_b
    hi = surface_energy(constants_from_magnitudes(U, 0.13, edge + d)).e_b
    assert abs(hi - lo) < 1e-6


def test_surface_energy_result_fields():
    r = surface_energy(constants_from_magnitudes(U, 0.13, 0.45))
    assert r.region is Region.I
    assert len(r.term_breakdown) == 5
    assert sum(r.term_breakdown) == pytest.approx(r.e_b, abs=1e-14)
    assert r.quadrature_error < 1e-8


@pytest.mark.parametrize("h", [0.3, 0.8, 1.5, 3.0])
def test_group_four_closed_form(h):
    dc = constants_from_magnitudes(U, h, h)
    num, _ = si.quad(lambda k: np.cos(k) * thermo.d_kernel(k, h), -math.pi, math.pi, limit=400, epsabs=1e-13)
    assert surface_energy(dc).term_breakdown[3] == pytest.approx(-2 * num, abs=1e-10)


@pytest.mark.parametrize("y", [-0.9, -0.2, 0.1, 0.6, 2.0])
def test_cos2_lorentz_closed_form(y):
    num, _ = si.quad(lambda k: np.cos(k) * thermo.lorentz_cos(k, y), -math.pi, math.pi, limit=400, epsabs=1e-13)
    assert thermo._cos2_lorentz_integral(y) == pytest.approx(num, abs=1e-10)


@pytest.mark.parametrize("h", [0.13, 0.45, 1.6])
def test_group_one_against_trapezoid(h):
    # a dense k grid resolves b_h when its width B is moderate
    dc = constants_from_magnitudes(U, h, h)
    n = 4096
    k = 2 * math.pi * np.arange(n) / n - math.pi
    K, _ = thermo._k_kernel(np.sin(k), U, literal=False)
    trap = 2 * np.sum(thermo.b_kernel(k, h) * K) * 2 * math.pi / n
    assert surface_energy(dc).term_breakdown[0] == pytest.approx(trap, abs=1e-9)


def test_printed_form_differs():
    dc = constants_from_magnitudes(U, 0.13, 0.45)
    assert surface_energy(dc, SurfaceForm.PRINTED).e_b != pytest.approx(surface_energy(dc).e_b, abs=0.1)
