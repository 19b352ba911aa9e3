import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hubbard_surface import (
    BoundaryClass,
    CriticalLineError,
    ModelParams,
    Region,
    boundary_string_values,
    classify_region,
    constants_from_magnitudes,
    critical_field,
    derive_constants,
)
from hubbard_surface.model import boundary_class, string_offset

U = 1.3

# h_1 and the h_N list of each surface-energy panel
PANELS = {
    Region.I: ((0.13, 0, 0), [(0.12, 0, 0.1204), (0.22, 0, 0.2184), (0.32, 0, 0.3164), (0.12, 0, 0.5572), (0.42, 0, 0.5220)]),
    Region.II: ((0.13, 0, 0), [(0.12, 0, 0.7505), (0.42, 0, 0.6573), (0.42, 0, 0.7733), (0.42, 0, 0.7159), (0.42, 0, 0.8185)]),
    Region.III: ((0.84, 0, 0), [(0.5723, 0, 0.53), (0.3315, 0, 0.75), (0.78, 0, 0.3378), (0.81, 0, 0.3688), (0.85, 0, 0.3774)]),
    Region.IV: ((0.76, 0, 0), [(0.32, 0, 1.1876), (0.32, 0, 1.2909), (0.32, 0, 1.3937), (0.32, 0, 1.4962), (0.32, 0, 1.5983)]),
    Region.V: ((1.03, 0, 0), [(0.47, 0, 1.0496), (0.47, 0, 1.1583), (0.47, 0, 1.2655), (0.47, 0, 1.3717), (0.47, 0, 1.4770)]),
}


def test_critical_field_value():
    assert critical_field(U) == pytest.approx(0.7264870, abs=1e-7)
    assert critical_field(U) == pytest.approx((-U + math.sqrt(U * U + 16)) / 4, rel=1e-14)


@given(st.floats(min_value=1e-3, max_value=1e4))
def test_critical_field_root(u):
    h0 = critical_field(u)
    assert 0 < h0 < 1
    assert 2 * h0 * h0 + u * h0 - 2 == pytest.approx(0.0, abs=1e-12 * max(1.0, u))
    assert string_offset(h0, u) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_critical_field_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        critical_field(bad)


@pytest.mark.parametrize("region", list(PANELS))
def test_panel_points_classify(region):
    h1, hNs = PANELS[region]
    for hN in hNs:
        dc = derive_constants(ModelParams(U, h1, hN))
        assert dc.region is region
        assert dc.c > 0  # none of the panel points is parallel


def test_classes():
    h0 = critical_field(U)
    assert boundary_class(0.5 * h0, U) is BoundaryClass.WEAK
    assert boundary_class(0.5 * (h0 + 1), U) is BoundaryClass.INTERMEDIATE
    assert boundary_class(1.5, U) is BoundaryClass.STRONG


@given(st.floats(0.01, 3.0), st.floats(0.01, 3.0))
def test_region_symmetric(a, b):
    try:
        ra = classify_region(a, b, U)
    except CriticalLineError:
        return
    assert classify_region(b, a, U) is ra


@pytest.mark.parametrize("h", [critical_field(U), 1.0])
def test_critical_lines_raise(h):
    with pytest.raises(CriticalLineError, match="critical line"):
        classify_region(0.1, h, U)


def test_string_positions():
    s = boundary_string_values(0.13, 0.84, U)
    assert s.k_strings == []
    assert s.lambda_strings == [pytest.approx((1 - 0.84**2) / 1.68 - U / 4)]
    assert s.strings[0].side == "right"
    s = boundary_string_values(2.0, 0.13, U)
    x = (4 - 1) / 4
    assert s.k_strings == [pytest.approx(x)]
    assert s.lambda_strings == [pytest.approx(x + U / 4)]
    assert {t.side for t in s.strings} == {"left"}
    assert len(boundary_string_values(0.1, 0.2, U)) == 0
    assert len(boundary_string_values(0.8, 1.7, U)) == 3


def test_intermediate_string_below_axis():
    # strings sit at i*p with p in (-U/4, 0) for h0 < h < 1
    for h in np.linspace(0.73, 0.99, 7):
        assert -U / 4 < string_offset(h, U) < 0


def test_derived_constants():
    dc = derive_constants(ModelParams(U, (0.3, 0.0, 0.4), (0.0, 0.0, 0.7)))
    assert dc.alpha == pytest.approx(0.5)
    assert dc.beta == pytest.approx(0.7)
    assert dc.c == pytest.approx(2 * (0.35 - 0.28))
    assert dc.eta == -0.65j
    assert dc.p == pytest.approx(0.5j * (0.49 - 1))
    assert dc.q == pytest.approx(0.5j * (1 - 0.25))
    assert dc.epsilon == 1
    assert constants_from_magnitudes(U, 0.5, 0.7).c == 0.0


@pytest.mark.parametrize(
    "h1,hN,u",
    [
        ((0, 0, 0.3), (0, 0, -0.3), U),  # antiparallel: epsilon = -1 branch
        ((0, 0, 0), (0, 0, 0.3), U),
        ((0, 0, 0.3), (0, 0, 0.3), 0.0),
        ((0, 0.3), (0, 0, 0.3), U),
    ],
)
def test_invalid_params(h1, hN, u):
    with pytest.raises(ValueError):
        ModelParams(u, h1, hN)
