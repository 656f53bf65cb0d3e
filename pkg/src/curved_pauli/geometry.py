"""Generalized trigonometric functions and Coulomb potentials on constant-curvature 3-spaces.

Natural units (hbar = c = 1).  The curvature ``kappa`` has units of 1/length**2;
``kappa > 0`` is the sphere, ``kappa < 0`` hyperbolic space, ``kappa == 0`` flat.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
import re

import numpy as np

from .errors import DomainError, PoleError

# |kappa| r^2 below this switches S/C to their Taylor series
TAYLOR_SWITCH = 1e-8
_POLE_TOL = 1e-14


@dataclass(frozen=True)
class PhysParams:
    """Physical inputs: curvature, mass and Coulomb coupling e**2."""

    kappa: float
    mass: float = 1.0
    e2: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.e2 > 0:
            raise DomainError(f"e2 must be positive, got {self.e2}")

    @property
    def a_B(self) -> float:
        return 1.0 / (self.mass * self.e2)

    @property
    def ry(self) -> float:
        return self.mass * self.e2**2 / 2.0

    @property
    def kappa_ab2(self) -> float:
        """Dimensionless curvature kappa * a_B**2."""
        return self.kappa * self.a_B**2

    @classmethod
    def from_kappa_ab2(cls, kappa_ab2: float, mass: float = 1.0, e2: float = 1.0) -> "PhysParams":
        a_B = 1.0 / (mass * e2)
        return cls(kappa=kappa_ab2 / a_B**2, mass=mass, e2=e2)


@dataclass(frozen=True)
class Channel:
    """Angular channel (j, parity).  ``two_j`` stores 2j so half-integers stay exact."""

    two_j: int
    parity: int = 1

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 1 or self.two_j % 2 != 1:
            raise DomainError(f"two_j must be a positive odd integer, got {self.two_j!r}")
        if self.parity not in (1, -1):
            raise DomainError(f"parity must be +1 or -1, got {self.parity!r}")

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def nu_bar(self) -> int:
        return self.two_j + 1

    @property
    def nu(self) -> float:
        return self.nu_bar / 2

    @property
    def signed_nu_bar(self) -> int:
        """nu_bar with the parity sign folded in (delta_P = -1 is nu -> -nu)."""
        return self.parity * self.nu_bar

    @classmethod
    def parse(cls, j: str, parity: int = 1) -> "Channel":
        """Build from the literal ``"1/2"``, ``"3/2"``, ... (no float parsing)."""
        if not re.fullmatch(r"\d+/2", j.strip()):
            raise DomainError(f"j must be written as an odd fraction like '1/2', got {j!r}")
        frac = Fraction(j.strip())
        if frac.denominator != 2:
            raise DomainError(f"j must be a half-integer, got {j!r}")
        return cls(two_j=frac.numerator, parity=parity)

    def __str__(self):
        sign = "+" if self.parity > 0 else "-"
        return f"j={self.two_j}/2, parity={sign}1"


def chart_limit(kappa: float) -> float:
    """Upper end of the radial chart: pi/sqrt(kappa) on the sphere, infinity otherwise."""
    return math.pi / math.sqrt(kappa) if kappa > 0 else math.inf


def _check_chart(kappa, r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be non-negative")
    if kappa > 0 and np.any(r > chart_limit(kappa) * (1 + 1e-14)):
        raise DomainError(f"radius beyond the sphere's chart r <= pi/sqrt(kappa) = {chart_limit(kappa)}")
    return r


def _sc(kappa, r):
    x = kappa * r * r
    small = np.abs(x) < TAYLOR_SWITCH
    if kappa > 0:
        k = math.sqrt(kappa)
        s = np.sin(k * r) / k
        c = np.cos(k * r)
    elif kappa < 0:
        k = math.sqrt(-kappa)
        s = np.sinh(k * r) / k
        c = np.cosh(k * r)
    else:
        s = r.copy()
        c = np.ones_like(r)
    if np.any(small):
        xs = x[small]
        rs = r[small]
        s[small] = rs * (1 - xs / 6 * (1 - xs / 20 * (1 - xs / 42)))
        c[small] = 1 - xs / 2 * (1 - xs / 12 * (1 - xs / 30))
    return s, c


def _out(v, like):
    return float(v) if np.ndim(like) == 0 else v


def s_kappa(kappa: float, r):
    """S_kappa(r): sin(sqrt(k) r)/sqrt(k), sinh(sqrt(|k|) r)/sqrt(|k|), or r."""
    ra = _check_chart(kappa, r)
    s, _ = _sc(kappa, np.atleast_1d(ra))
    return _out(s.reshape(ra.shape), r)


def c_kappa(kappa: float, r):
    """C_kappa(r) = d S_kappa / dr."""
    ra = _check_chart(kappa, r)
    _, c = _sc(kappa, np.atleast_1d(ra))
    return _out(c.reshape(ra.shape), r)


def t_kappa(kappa: float, r):
    """T_kappa = S_kappa / C_kappa.  Raises PoleError at the sphere's equator."""
    ra = _check_chart(kappa, r)
    s, c = _sc(kappa, np.atleast_1d(ra))
    if np.any(np.abs(c) < _POLE_TOL):
        raise PoleError("T_kappa has a pole where C_kappa = 0 (r = pi/(2 sqrt(kappa)))")
    return _out((s / c).reshape(ra.shape), r)


def _inv_t(kappa, r):
    s, c = _sc(kappa, np.atleast_1d(r))
    if np.any(np.abs(s) < _POLE_TOL * np.maximum(1.0, np.abs(np.atleast_1d(r)))):
        raise PoleError("S_kappa vanishes: potential diverges at the chart endpoint")
    return s, c, c / s


def coulomb_energy(params: PhysParams, r):
    """Potential energy e*A_0 = -e**2 / T_kappa(r).

    Evaluated as -e**2 C/S, so the sphere's equator gives 0 rather than a pole.
    """
    ra = _check_chart(params.kappa, r)
    _, _, inv_t = _inv_t(params.kappa, ra)
    return _out((-params.e2 * inv_t).reshape(ra.shape), r)


def effective_potential(params: PhysParams, channel: Channel, r):
    """W(r) in -f'' + W f = 2 m eps f for the large radial component.

    W = nu (nu + delta_P C)/S**2 - 2 m e**2 C/S.
    """
    ra = _check_chart(params.kappa, r)
    s, c, inv_t = _inv_t(params.kappa, ra)
    nu = channel.nu
    w = nu * (nu + channel.parity * c) / s**2 - 2.0 * params.mass * params.e2 * inv_t
    return _out(w.reshape(ra.shape), r)
