"""The radial Pauli problem as a generalized Heun equation in z = exp(i sqrt(kappa) r).

The non-relativistic limit of the radial Dirac system gives, for the large
component f (parity +1) or g (parity -1),

    f'' - [nu (nu + delta_P C)/S**2 - 2 m eps - 2 m e**2 / T] f = 0,

and the parity -1 equation is the parity +1 one with nu -> -nu.  Substituting
z = exp(i sqrt(kappa) r) turns it into

    f_zz + (pi1/sigma) f_z + (sigma1/sigma**2) f = 0

with sigma = z (1 - z**2), pi1 = 1 - z**2 and a quartic sigma1.
"""
from __future__ import annotations

from dataclasses import dataclass
import cmath
from typing import Callable

from .errors import ContractError, FlatSpaceUnsupported
from .geometry import Channel, PhysParams, c_kappa, s_kappa
from .polyalg import ComplexPoly


@dataclass(frozen=True)
class Dimensionless:
    """eps_bar = 2 m eps / kappa, lam_bar = 2 i m e**2 / sqrt(kappa), signed nu_bar."""

    eps_bar: complex
    lam_bar: complex
    nu_bar: int


@dataclass(frozen=True)
class GeneralizedHeunODE:
    sigma: ComplexPoly
    pi1: ComplexPoly
    sigma1: ComplexPoly


def sqrt_kappa(kappa: complex) -> complex:
    """Principal square root; for kappa < 0 this is i sqrt(|kappa|)."""
    return cmath.sqrt(complex(kappa))


def lam_bar(params: PhysParams) -> complex:
    if params.kappa == 0:
        raise FlatSpaceUnsupported("the z-reduction assumes kappa != 0; use the finite-difference oracle")
    return 2j * params.mass * params.e2 / sqrt_kappa(params.kappa)


def make_dimensionless(params: PhysParams, channel: Channel, eps: complex) -> Dimensionless:
    """Dimensionless energy and coupling for binding energy ``eps``.

    The parity is folded into the sign of ``nu_bar`` (parity -1 is nu -> -nu).
    """
    lb = lam_bar(params)
    return Dimensionless(
        eps_bar=2 * params.mass * complex(eps) / params.kappa,
        lam_bar=lb,
        nu_bar=channel.signed_nu_bar,
    )


def eps_from_eps_bar(params: PhysParams, eps_bar: complex) -> complex:
    return eps_bar * params.kappa / (2 * params.mass)


def nonrelativistic_strain(params: PhysParams, eps: float) -> bool:
    """True when |eps| > 0.1 m, i.e. the small-binding assumption is strained."""
    return abs(eps) > 0.1 * params.mass


def build_ode(d: Dimensionless) -> GeneralizedHeunODE:
    e, lam, nb = d.eps_bar, d.lam_bar, d.nu_bar
    sigma = ComplexPoly([0, 1, 0, -1])
    pi1 = ComplexPoly([1, 0, -1])
    sigma1 = ComplexPoly([lam - e, -nb, 2 * e - nb * nb, -nb, -(lam + e)])
    return GeneralizedHeunODE(sigma, pi1, sigma1)


def _is_singular(z: complex) -> bool:
    return min(abs(z), abs(z - 1), abs(z + 1)) < 1e-12


def derivatives(f: Callable[[complex], complex], z: complex, step: float = 1e-3) -> tuple[complex, complex, complex]:
    """f, f', f'' at z by fourth-order central differences along the real axis."""
    h = step * max(1.0, abs(z))
    fm2, fm1, f0, fp1, fp2 = (f(z + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return f0, d1, d2


def ode_residual(
    ode: GeneralizedHeunODE,
    f: Callable[[complex], complex],
    z: complex,
    df: Callable[[complex], complex] | None = None,
    d2f: Callable[[complex], complex] | None = None,
) -> complex:
    """f'' + (pi1/sigma) f' + (sigma1/sigma**2) f at z.

    Derivatives are taken numerically unless ``df`` and ``d2f`` are supplied.
    """
    if _is_singular(z):
        raise ContractError(f"z = {z} is a singular point of the ODE (0, +1 or -1)")
    if df is None or d2f is None:
        f0, f1, f2 = derivatives(f, z)
    else:
        f0, f1, f2 = f(z), df(z), d2f(z)
    sig = ode.sigma(z)
    return f2 + ode.pi1(z) / sig * f1 + ode.sigma1(z) / sig**2 * f0


def radial_residual(
    params: PhysParams,
    channel: Channel,
    eps: complex,
    F: complex,
    dF2: complex,
    r: float,
) -> complex:
    """F'' - [nu (nu + delta_P C)/S**2 - 2 m eps - 2 m e**2 C/S] F at r, given F(r) and F''(r)."""
    s = s_kappa(params.kappa, r)
    c = c_kappa(params.kappa, r)
    nu = channel.nu
    bracket = nu * (nu + channel.parity * c) / s**2 - 2 * params.mass * eps - 2 * params.mass * params.e2 * c / s
    return dF2 - bracket * F
