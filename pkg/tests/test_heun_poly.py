import math

import numpy as np
import pytest
import sympy as sp

from curved_pauli.enu_core import quantized_alpha_beta
from curved_pauli.geometry import Channel, PhysParams
from curved_pauli.heun_poly import (
    accessory_values,
    attach_existence,
    build_system_synthetic,
    delta1_closed_form,
    delta1_expanded,
    diagonal_discrepancy_record,
    existence_check,
    synthetic_check,
)
from curved_pauli.enu_core import spectrum
from curved_pauli.polyalg import tridiag_det


def test_build_system_worked_example():
    sysm = build_system_synthetic(4, -2, -11, -7, 1)
    np.testing.assert_allclose(sysm.matrix.dense(), [[-7, 5], [11, -9]], atol=1e-12)
    assert tridiag_det(sysm.matrix) == pytest.approx(8)


def test_build_system_degree_zero():
    sysm = build_system_synthetic(4, -2, 0, -7, 0)
    np.testing.assert_allclose(sysm.matrix.dense(), [[-7]])


@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_power_matching_against_symbolic_expansion(n):
    a, c, q = sp.Rational(3, 2), sp.Rational(-5, 3), sp.Rational(7, 4)
    ab = -n * (n + 2 + 2 * a)
    z = sp.symbols("z")
    cs = sp.symbols(f"c0:{n + 1}")
    y = sum(ci * z**i for i, ci in enumerate(cs))
    tau = (1 - z**2) + 2 * (-z**2 - (a * z**2 + z + c))
    expr = sp.expand((z - z**3) * sp.diff(y, z, 2) + tau * sp.diff(y, z) + (q - ab * z) * y)
    poly = sp.Poly(expr, z)
    sysm = build_system_synthetic(float(a), float(c), float(ab), float(q), n)
    dense = sysm.matrix.dense()
    for k in range(n + 1):
        row = [float(poly.coeff_monomial(z**k).coeff(ci)) for ci in cs]
        np.testing.assert_allclose(dense[k].real, row, atol=1e-10)
    # the z^{n+1} row vanishes under quantization
    top = [float(poly.coeff_monomial(z ** (n + 1)).coeff(ci)) for ci in cs]
    assert max(abs(t) for t in top) < 1e-12
    assert sysm.record()["top_row_vanishes"]


def test_delta1_examples():
    assert delta1_closed_form(2) == 8
    assert delta1_closed_form(4) == 24
    assert delta1_closed_form(0) == 0
    assert delta1_expanded(4, -2, -7, -11) == pytest.approx(8)


@pytest.mark.parametrize("kab2", [0.01, 0.3, -0.01])
@pytest.mark.parametrize("two_j,expected", [(1, 8), (3, 24), (5, 48)])
def test_no_degree_one_polynomial(kab2, two_j, expected):
    for parity in (1, -1):
        res = existence_check(PhysParams.from_kappa_ab2(kab2), Channel(two_j, parity), 1)
        assert res.determinant == pytest.approx(expected, rel=1e-10)
        assert not res.exists and res.null_vector is None


@pytest.mark.parametrize("n", [3, 5, 7])
def test_higher_degree_scan_reports_nonzero(n):
    # exploratory: nonzero determinants at a physical spherical curvature
    res = existence_check(PhysParams.from_kappa_ab2(0.01), Channel(1), n)
    assert np.isfinite(abs(res.determinant))
    assert not res.exists
    print(f"n={n} det={res.determinant:.6g}")


def test_positive_control_from_accessory_parameter():
    a, c = 2.5, -1.5
    for n in (1, 2, 3, 5):
        for q in accessory_values(a, c, n):
            res = synthetic_check(a, c, quantized_alpha_beta(a, n), q, n)
            assert res.exists
            assert res.residual < 1e-9
            assert max(abs(res.null_vector)) == pytest.approx(1)


def test_positive_control_inside_the_physical_family():
    # at lam_bar = 9 sqrt(2) (hyperbolic, kappa a_B^2 = -2/81) the n = 3 determinant vanishes
    params = PhysParams.from_kappa_ab2(-4 / 162)
    res = existence_check(params, Channel(1), 3)
    assert res.exists and res.residual < 1e-9
    line = spectrum(params, Channel(1), 3)[3]
    assert not line.accepted  # but the gauge factor is not normalizable
    assert line.A.real < 0


def test_negative_control_random_q():
    rng = np.random.default_rng(30)
    for _ in range(20):
        q = complex(*rng.normal(size=2)) * 10
        assert not synthetic_check(2.5, -1.5, quantized_alpha_beta(2.5, 3), q, 3).exists


def test_discrepancy_record():
    rec = diagonal_discrepancy_record()
    assert rec["derived_diagonal"] == "q-2m"
    assert rec["delta1_consistent_with"] == "q-2m"
    assert rec["delta1_derived"][0] == pytest.approx(8)
    assert rec["delta1_with_q_minus_4m"][0] == pytest.approx(22)
    assert rec["offdiagonals_match"]


def test_attach_existence():
    p = PhysParams.from_kappa_ab2(0.02)
    lines = attach_existence(spectrum(p, Channel(1), 3), p, Channel(1))
    assert lines[1].determinant == pytest.approx(8)
    assert all(ln.polynomial_exists is False for ln in lines[1:])


def test_degree_three_determinant_changes_sign_at_root():
    # the n = 3 determinant is quadratic in lam_bar with a root at 9 sqrt(2)
    dets = [existence_check(PhysParams(kappa=-4 / lb**2), Channel(1), 3).determinant.real
            for lb in (12.0, 9 * math.sqrt(2), 13.5)]
    assert dets[0] * dets[2] < 0
    assert abs(dets[1]) < 1e-8 * max(abs(dets[0]), abs(dets[2]))
