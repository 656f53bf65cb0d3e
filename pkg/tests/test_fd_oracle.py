import math

import numpy as np
import pytest

from curved_pauli.enu_core import spectrum
from curved_pauli.errors import DomainError
from curved_pauli.fd_oracle import (
    compare,
    continuum_threshold,
    converged_levels,
    count_below,
    discretize,
    orbital_l,
    richardson,
    solve_levels,
)
from curved_pauli.geometry import Channel, PhysParams

FLAT = PhysParams(kappa=0.0)


def test_discretize_spherical_grid():
    p = PhysParams(kappa=1.0)
    prob = discretize(p, Channel(1), h=0.01)
    assert prob.r_max == pytest.approx(math.pi)
    assert prob.r[0] == pytest.approx(prob.h)
    assert prob.r[-1] == pytest.approx(math.pi - prob.h)
    assert prob.h == pytest.approx(0.01, rel=0.01)
    with pytest.raises(DomainError):
        discretize(p, Channel(1), h=0.01, r_max=4.0)


def test_discretize_flat_default_box():
    prob = discretize(FLAT, Channel(1), h=0.5)
    assert prob.r_max == pytest.approx(60.0)
    assert prob.n_points == 119


def test_matrix_is_symmetric_and_matches_stencil():
    prob = discretize(PhysParams(kappa=0.05), Channel(3, -1), h=0.2)
    m = prob.dense()
    np.testing.assert_array_equal(m, m.T)
    # second-difference stencil applied to a smooth function
    f = np.sin(prob.r / 3)
    lap = (m @ f - prob.potential * f)[1:-1]
    np.testing.assert_allclose(lap, (np.sin(prob.r / 3) / 9)[1:-1], atol=5e-4)


def test_eigenvalues_match_dense_solver():
    prob = discretize(PhysParams(kappa=-0.02), Channel(1), h=0.3)
    fast = [lv.two_m_eps for lv in solve_levels(prob, 4).levels]
    dense = np.linalg.eigvalsh(prob.dense())[:4]
    np.testing.assert_allclose(fast, dense, rtol=1e-10)


def test_count_below_is_sturm_count():
    prob = discretize(FLAT, Channel(1, -1), h=0.2)
    vals = np.linalg.eigvalsh(prob.dense())
    for t in (-1.5, -0.2, 0.0, 0.3):
        assert count_below(prob, t) == int(np.sum(vals < t))


def test_richardson_exact_for_quadratic_error():
    assert richardson([1 + 0.04, 1 + 0.01]) == pytest.approx(1)


@pytest.mark.parametrize("parity,expected", [(-1, -1.0), (1, -0.25)])
def test_flat_calibration(parity, expected):
    rep = converged_levels(FLAT, Channel(1, parity), k=1, h=0.04, r_max=60.0)
    assert rep.richardson_estimate[0] == pytest.approx(expected, rel=1e-4)
    assert rep.observed_order[0] == pytest.approx(2.0, abs=0.2)
    assert rep.error_estimate[0] < 1e-4


def test_flat_excited_levels_hydrogen_degeneracy():
    rep = converged_levels(FLAT, Channel(1, -1), k=3, h=0.04, r_max=120.0)
    np.testing.assert_allclose(rep.richardson_estimate, [-1, -1 / 4, -1 / 9], rtol=1e-4)


def test_box_size_monotonicity():
    # Dirichlet eigenvalues decrease as the box grows
    vals = [solve_levels(discretize(FLAT, Channel(1), h=0.05, r_max=rm), 1).levels[0].eps_over_ry
            for rm in (10.0, 20.0, 40.0)]
    assert vals[0] > vals[1] > vals[2]


def test_hyperbolic_bound_state_count_stable():
    p = PhysParams.from_kappa_ab2(-0.04)
    thr = continuum_threshold(p)
    assert thr == pytest.approx(-0.2)  # -e^2 sqrt(|kappa|), i.e. -0.4 Ry
    counts = [count_below(discretize(p, Channel(1), h=h), 2 * p.mass * thr) for h in (0.08, 0.04)]
    assert counts[0] == counts[1]


def test_orbital_l():
    assert orbital_l(Channel(1, -1)) == 0
    assert orbital_l(Channel(1, 1)) == 1
    assert orbital_l(Channel(3, 1)) == 2


@pytest.mark.parametrize("kab2", [0.01, -0.01, 0.04])
def test_compare_shift_column(kab2):
    p = PhysParams.from_kappa_ab2(kab2)
    ch = Channel(1)
    rep = converged_levels(p, ch, k=2, h=0.08)
    rows = compare(rep, p, ch, spectrum(p, ch, 5))
    for row in rows:
        assert row.geometric_shift == pytest.approx(kab2, abs=1e-15)
        assert row.dev_closed_form - row.dev_schrodinger == pytest.approx(-kab2, abs=1e-14)
    assert rows[0].n_principal == 2
    if kab2 == 0.01:
        assert rows[0].closed_form == pytest.approx(-0.21)
        assert rows[0].enu_candidate


def test_compare_flat_columns_coincide():
    rep = converged_levels(FLAT, Channel(1), k=1, h=0.08)
    (row,) = compare(rep, FLAT, Channel(1))
    assert row.closed_form == row.schrodinger == pytest.approx(-0.25)
