import cmath
import math

import numpy as np
import pytest
import sympy as sp

from curved_pauli.enu_core import solve_level
from curved_pauli.errors import ContractError, FlatSpaceUnsupported
from curved_pauli.geometry import Channel, PhysParams
from curved_pauli.heun_poly import build_system
from curved_pauli.polyalg import ComplexPoly, tridiag_null_vector
from curved_pauli.radial_model import (
    Dimensionless,
    build_ode,
    make_dimensionless,
    nonrelativistic_strain,
    ode_residual,
    radial_residual,
)

Z = ComplexPoly.z()


def test_make_dimensionless_examples():
    d = make_dimensionless(PhysParams(kappa=1.0), Channel(1, 1), 0.5)
    assert d.eps_bar == 1 and d.lam_bar == pytest.approx(2j) and d.nu_bar == 2
    d = make_dimensionless(PhysParams(kappa=-1.0), Channel(1, 1), -0.5)
    assert d.eps_bar == 1 and d.lam_bar == pytest.approx(2) and d.nu_bar == 2
    with pytest.raises(FlatSpaceUnsupported):
        make_dimensionless(PhysParams(kappa=0.0), Channel(1, 1), -0.5)


def test_lam_bar_branches():
    for k in (0.01, 0.3, 4.0):
        lb = make_dimensionless(PhysParams(kappa=k), Channel(1), -0.1).lam_bar
        assert lb.real == pytest.approx(0, abs=1e-14) and lb.imag > 0
    for k in (-0.01, -0.3, -4.0):
        lb = make_dimensionless(PhysParams(kappa=k), Channel(1), -0.1).lam_bar
        assert lb.imag == pytest.approx(0, abs=1e-14) and lb.real > 0


def test_parity_folds_into_nu_bar():
    assert make_dimensionless(PhysParams(kappa=1.0), Channel(3, -1), 0.1).nu_bar == -4


def test_build_ode_examples():
    ode = build_ode(Dimensionless(1, 2j, 2))
    assert ode.sigma1.allclose(ComplexPoly([2j - 1, -2, -2, -2, -(2j + 1)]), 1e-15)
    ode = build_ode(Dimensionless(0, 0, 2))
    assert ode.sigma1 == ComplexPoly([0, -2, -4, -2])
    assert ode.sigma == Z - Z**3
    assert ode.pi1 == 1 - Z**2


def test_build_ode_against_substitution_table():
    # sigma1 re-derived from the z-substitution: centrifugal, energy and Coulomb parts
    rng = np.random.default_rng(10)
    for _ in range(100):
        e = complex(*rng.normal(size=2)) * 5
        lam = complex(*rng.normal(size=2)) * 5
        nb = int(rng.integers(-12, 13))
        table = (-(nb * nb) * Z**2 - nb * Z * (1 + Z**2)
                 - (Z**2 - 1) ** 2 * e - (Z**4 - 1) * lam)
        assert build_ode(Dimensionless(e, lam, nb)).sigma1.allclose(table, 1e-13)


def test_ode_residual_examples():
    ode = build_ode(Dimensionless(3.1, 0.7j, 2))
    assert ode_residual(ode, lambda z: 0j, 0.3 + 0.2j) == 0
    assert abs(ode_residual(ode, lambda z: z, 0.3 + 0.2j, lambda z: 1, lambda z: 0)) > 1
    assert abs(ode_residual(ode, lambda z: z, 0.3 + 0.2j)) > 1
    for z in (0, 1, -1):
        with pytest.raises(ContractError):
            ode_residual(ode, lambda z: z, z)


def test_numeric_and_analytic_derivatives_agree():
    ode = build_ode(Dimensionless(2.0, 1.5j, 4))
    f = lambda z: cmath.exp(0.3 * z) * z**2
    df = lambda z: cmath.exp(0.3 * z) * (2 * z + 0.3 * z**2)
    d2f = lambda z: cmath.exp(0.3 * z) * (2 + 1.2 * z + 0.09 * z**2)
    z = 0.4 - 0.3j
    a = ode_residual(ode, f, z, df, d2f)
    b = ode_residual(ode, f, z)
    assert abs(a - b) <= 1e-8 * max(1, abs(a))


@pytest.mark.parametrize("kappa", [0.3, -0.3, 1.7, -0.05])
@pytest.mark.parametrize("parity", [1, -1])
def test_z_form_matches_r_form_by_chain_rule(kappa, parity):
    params = PhysParams(kappa=kappa, mass=1.3, e2=0.8)
    ch = Channel(3, parity)
    eps = -0.07 + 0.0j
    d = make_dimensionless(params, ch, eps)
    ode = build_ode(d)
    k = cmath.sqrt(kappa)
    f = lambda z: cmath.exp(0.5j * z) + 0.2 * z**3
    df = lambda z: 0.5j * cmath.exp(0.5j * z) + 0.6 * z**2
    d2f = lambda z: -0.25 * cmath.exp(0.5j * z) + 1.2 * z
    rng = np.random.default_rng(11)
    hi = math.pi / math.sqrt(kappa) if kappa > 0 else 6.0
    for r in rng.uniform(0.05 * hi, 0.95 * hi, 20):
        z = cmath.exp(1j * k * r)
        F = f(z)
        F2 = -kappa * (z * z * d2f(z) + z * df(z))
        res_r = radial_residual(params, ch, eps, F, F2, r)
        res_z = ode_residual(ode, f, z, df, d2f)
        expected = -kappa * z * z * res_z
        assert abs(res_r - expected) <= 1e-8 * max(abs(res_r), abs(F) * 1e-3, 1e-12)


def test_operator_identity_gives_radial_equation():
    r, k, nu, m, eps, e2 = sp.symbols("r k nu m epsilon e2", positive=True)
    f = sp.Function("f")(r)
    S = sp.sin(k * r) / k
    C = sp.cos(k * r)
    for sgn in (1, -1):
        lhs = sp.diff(sp.diff(f, r) + sgn * nu / S * f, r) - sgn * nu / S * (sp.diff(f, r) + sgn * nu / S * f)
        rhs = sp.diff(f, r, 2) - nu * (nu + sgn * C) / S**2 * f
        assert sp.simplify(lhs - rhs) == 0
    # eliminate the small component from the linearized first-order system
    g = -(sp.diff(f, r) + nu / S * f) / (2 * m)
    second = sp.diff(g, r) - nu / S * g - (eps + e2 * C / S) * f
    radial = sp.diff(f, r, 2) - (nu * (nu + C) / S**2 - 2 * m * eps - 2 * m * e2 * C / S) * f
    assert sp.simplify(-2 * m * second - radial) == 0


def test_nonrelativistic_flag():
    p = PhysParams(kappa=0.0, mass=1.0)
    assert not nonrelativistic_strain(p, -0.05)
    assert nonrelativistic_strain(p, -0.2)


def test_reduced_solution_solves_generalized_heun():
    # at lam_bar = 9 sqrt(2) the n = 3 system is singular, so a polynomial y exists
    lb = 9 * math.sqrt(2)
    lev = solve_level(lb, 2, 3)
    system = build_system(lev.reduction, lev.heun, 3)
    coeffs = tridiag_null_vector(system.matrix, tol=1e-10)
    y = ComplexPoly(coeffs)
    red = lev.reduction
    ode = build_ode(lev.dimensionless)

    def f(z):
        return red.gauge_factor(z) * y(z)

    def df(z):
        return red.gauge_factor(z) * (y.derivative()(z) + red.gauge_log_derivative(z) * y(z))

    def d2f(z):
        L = red.gauge_log_derivative(z)
        dL = -red.A / z**2 - red.B / (z - 1) ** 2 - red.C / (z + 1) ** 2
        return red.gauge_factor(z) * (y.derivative(2)(z) + 2 * L * y.derivative()(z) + (dL + L * L) * y(z))

    rng = np.random.default_rng(12)
    for _ in range(10):
        z = complex(rng.uniform(0.1, 0.9), rng.uniform(-0.4, 0.4))
        terms = abs(d2f(z)) + abs(ode.pi1(z) / ode.sigma(z) * df(z)) + abs(ode.sigma1(z) / ode.sigma(z) ** 2 * f(z))
        assert abs(ode_residual(ode, f, z, df, d2f)) <= 1e-8 * terms
