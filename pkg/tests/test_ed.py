import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from hubbard_surface import ModelParams
from hubbard_surface.ed import (
    MAX_SITES,
    basis_states,
    block_dimension,
    build_hamiltonian,
    delta_e,
    fit_power_law,
    ground_energy,
    half_filled_energy,
    sector_energies,
)

U = 1.3


def _up_count(states, N):
    mask = sum(1 << (2 * j) for j in range(N))
    return np.array([bin(int(s) & mask).count("1") for s in states])


def test_block_dimension():
    for N in (2, 3, 4):
        assert len(basis_states(N)) == block_dimension(N) == math.comb(2 * N, N)
        assert len(basis_states(N, N, 1)) == N * math.comb(N, N - 1)


@pytest.mark.parametrize("h1,hN", [((0.1, 0.2, 0.3), (0.3, -0.1, 0.5)), ((0, 0, 0.3), (0, 0, 0.8))])
def test_hermitian(h1, hN):
    H = build_hamiltonian(ModelParams(U, h1, hN), 4).matrix
    assert abs(H - H.getH()).max() < 1e-14


def test_single_site_spectrum():
    # h1 + hN acts on the one site
    p = ModelParams(U, (0, 0, 0.2), (0, 0, 0.3))
    levels = sorted(
        float(v) for n in (0, 1, 2) for v in np.linalg.eigvalsh(build_hamiltonian(p, 1, n_elec=n).matrix.toarray())
    )
    assert levels == pytest.approx(sorted([0.0, 0.5, -0.5, U]), abs=1e-14)


def test_two_sites_equal_fields():
    # with alpha = beta along z the S^z = 0 block does not see the fields
    p = ModelParams.parallel(U, 0.84, 0.84)
    e = ground_energy(build_hamiltonian(p, 2, n_elec=2, n_up=1))
    assert e == pytest.approx((U - math.sqrt(U * U + 16)) / 2, abs=1e-13)


def test_z_fields_conserve_sz():
    N = 4
    op = build_hamiltonian(ModelParams.parallel(U, 0.3, 0.5), N)
    H = op.matrix.tocoo()
    nu = _up_count(op.states, N)
    assert np.all(nu[H.row] == nu[H.col])
    # a transverse field breaks it
    op = build_hamiltonian(ModelParams(U, (0.3, 0, 0.1), (0, 0, 0.5)), N)
    H = op.matrix.tocoo()
    nu = _up_count(op.states, N)
    assert np.any(nu[H.row] != nu[H.col])


def test_sector_minimum_is_ground():
    p = ModelParams.parallel(U, 0.3, 0.84)
    secs = sector_energies(p, 4)
    assert min(secs.values()) == pytest.approx(half_filled_energy(p, 4), abs=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.05, 1.5), st.floats(0.05, 1.5))
def test_common_rotation_invariance(seed, a, b):
    R = Rotation.random(random_state=seed).as_matrix()
    p = ModelParams.parallel(U, a, b)
    q = ModelParams(U, tuple(R @ np.array(p.h1)), tuple(R @ np.array(p.hN)))
    assert half_filled_energy(q, 4) == pytest.approx(half_filled_energy(p, 4), abs=1e-11)


def test_delta_e_parallel_vanishes():
    p = ModelParams(U, (0.3, 0.0, 0.4), (0.6, 0.0, 0.8))
    assert delta_e(p, 6).delta_e < 1e-9


def test_delta_e_positive_for_tilted_fields():
    r = delta_e(ModelParams(U, (0.13, 0, 0), (0.12, 0, 0.1204)), 4)
    assert r.delta_e == pytest.approx(abs(r.E - r.E_hom))
    assert r.delta_e > 1e-4


def test_dense_matches_lanczos():
    H = build_hamiltonian(ModelParams(U, (0.2, 0.1, 0.3), (0.1, 0, 0.9)), 6)
    assert ground_energy(H, dense=True) == pytest.approx(ground_energy(H, dense=False), abs=1e-9)


def test_fit_recovers_power_law():
    Ns = np.array([4, 6, 8, 10, 20])
    fit = fit_power_law(zip(Ns, 0.0311 * Ns**-0.7822))
    assert fit.gamma == pytest.approx(0.0311, rel=1e-10)
    assert fit.tau == pytest.approx(-0.7822, rel=1e-10)
    assert fit.max_log_residual < 1e-10


@pytest.mark.parametrize("pts", [[(4, 1e-3), (6, 1e-3)], [(4, 1e-3), (6, 0.0), (8, 1e-4)]])
def test_fit_rejects_bad_input(pts):
    with pytest.raises(ValueError):
        fit_power_law(pts)


def test_size_limits():
    p = ModelParams.parallel(U, 0.3, 0.3)
    with pytest.raises(ValueError):
        build_hamiltonian(p, MAX_SITES + 1)
    with pytest.raises(ValueError, match="fields along z"):
        build_hamiltonian(ModelParams(U, (0.1, 0, 0.3), (0, 0, 0.3)), 2, n_up=1)
