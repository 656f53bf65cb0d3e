"""Dense complex polynomials and tridiagonal determinants."""
from __future__ import annotations

from dataclasses import dataclass
import cmath
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, NoNullVector


class ComplexPoly:
    """Univariate polynomial with complex coefficients, lowest degree first.

    Trailing zeros are trimmed, so the zero polynomial has ``coeffs == ()`` and
    ``degree() == -1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = [complex(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[complex, ...] = tuple(c)

    @classmethod
    def const(cls, value: complex) -> "ComplexPoly":
        return cls([value])

    @classmethod
    def z(cls) -> "ComplexPoly":
        return cls([0, 1])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> complex:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0j

    def scale(self) -> float:
        """Largest coefficient magnitude; the reference for relative zero tests."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    def _coerce(self, other):
        if isinstance(other, ComplexPoly):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return ComplexPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return ComplexPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ComplexPoly()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ContractError("negative powers are not polynomials")
        out = ComplexPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def scaled(self, factor: complex) -> "ComplexPoly":
        return ComplexPoly(factor * c for c in self.coeffs)

    def derivative(self, order: int = 1) -> "ComplexPoly":
        p = self
        for _ in range(order):
            p = ComplexPoly(k * c for k, c in enumerate(p.coeffs) if k > 0)
        return p

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Horner evaluation; works elementwise on numpy arrays."""
        acc = 0j if np.ndim(z) == 0 else np.zeros(np.shape(z), dtype=complex)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def allclose(self, other: "ComplexPoly", rtol: float = 1e-10) -> bool:
        """Coefficient-wise equality relative to the larger coefficient scale."""
        diff = self - other
        ref = max(self.scale(), other.scale(), 1e-300)
        return diff.scale() <= rtol * ref

    def __eq__(self, other):
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ComplexPoly({list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            cs = f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}j)"
            terms.append(cs if k == 0 else f"{cs}*z" if k == 1 else f"{cs}*z^{k}")
        return " + ".join(terms)


def _canonical_sign(s: ComplexPoly) -> ComplexPoly:
    # leading coefficient argument in (-pi/2, pi/2]
    if s.is_zero():
        return s
    lead = s.coeffs[-1]
    arg = cmath.phase(lead)
    if arg <= -math.pi / 2 or arg > math.pi / 2:
        return -s
    return s


def perfect_square_root(p: ComplexPoly, rtol: float = 1e-10) -> ComplexPoly | None:
    """Return s with s**2 == p (deg p in {0, 2, 4}), or None if p is not a square.

    Coefficients of s are matched from the top down; the remaining low-order
    coefficients of p must then agree to ``rtol`` relative to ``p.scale()``.
    """
    d = p.degree()
    if d == -1:
        return ComplexPoly()
    if d % 2 == 1 or d > 4:
        raise ContractError(f"perfect_square_root needs degree 0, 2 or 4, got {d}")
    half = d // 2
    s = [0j] * (half + 1)
    s[half] = cmath.sqrt(p.coeffs[d])
    lead2 = 2 * s[half]
    # coefficient of z^(d-k) in s^2 fixes s[half-k]
    for k in range(1, half + 1):
        acc = p.coeff(d - k)
        for i in range(half - k + 1, half):
            acc -= s[i] * s[d - k - i]
        s[half - k] = acc / lead2
    root = ComplexPoly(s)
    if not (root * root).allclose(p, rtol):
        return None
    return _canonical_sign(root)


@dataclass(frozen=True)
class Tridiag:
    """Tridiagonal matrix: ``sub[m-1]`` at (m, m-1), ``diag[m]`` at (m, m), ``sup[m-1]`` at (m-1, m)."""

    sub: tuple[complex, ...]
    diag: tuple[complex, ...]
    sup: tuple[complex, ...]

    def __init__(self, sub: Sequence[complex], diag: Sequence[complex], sup: Sequence[complex]):
        object.__setattr__(self, "sub", tuple(complex(x) for x in sub))
        object.__setattr__(self, "diag", tuple(complex(x) for x in diag))
        object.__setattr__(self, "sup", tuple(complex(x) for x in sup))
        n = len(self.diag) - 1
        if n < 0 or len(self.sub) != n or len(self.sup) != n:
            raise ContractError(
                f"Tridiag needs len(diag)=n+1, len(sub)=len(sup)=n; got {len(self.sub)}, {len(self.diag)}, {len(self.sup)}"
            )

    @property
    def size(self) -> int:
        return len(self.diag)

    def norm(self) -> float:
        """Max absolute entry."""
        return max(abs(x) for x in self.sub + self.diag + self.sup)

    def dense(self) -> np.ndarray:
        n = self.size
        a = np.zeros((n, n), dtype=complex)
        a[np.arange(n), np.arange(n)] = self.diag
        if n > 1:
            a[np.arange(1, n), np.arange(n - 1)] = self.sub
            a[np.arange(n - 1), np.arange(1, n)] = self.sup
        return a


_RESCALE_ABOVE = 2.0**400
_RESCALE_BELOW = 2.0**-400


def tridiag_det_scaled(t: Tridiag) -> tuple[complex, int]:
    """Determinant as ``(mantissa, exponent)`` with det = mantissa * 2**exponent.

    Uses D_m = b_m D_{m-1} - a_m c_m D_{m-2}, D_{-1} = 1, D_0 = b_0, rescaling the
    running pair whenever it drifts far from unit magnitude.
    """
    d_prev, d_cur = 1 + 0j, t.diag[0]
    exp = 0
    for m in range(1, t.size):
        d_prev, d_cur = d_cur, t.diag[m] * d_cur - t.sub[m - 1] * t.sup[m - 1] * d_prev
        big = max(abs(d_prev), abs(d_cur))
        if big > _RESCALE_ABOVE or (0 < big < _RESCALE_BELOW):
            _, e = math.frexp(big)
            d_prev = d_prev * 2.0**-e
            d_cur = d_cur * 2.0**-e
            exp += e
    return d_cur, exp


def tridiag_det(t: Tridiag) -> complex:
    """Determinant by the three-term recurrence (scaled internally for n > 20)."""
    if t.size <= 21:
        d_prev, d_cur = 1 + 0j, t.diag[0]
        for m in range(1, t.size):
            d_prev, d_cur = d_cur, t.diag[m] * d_cur - t.sub[m - 1] * t.sup[m - 1] * d_prev
        return d_cur
    mant, exp = tridiag_det_scaled(t)
    if mant == 0:
        return 0j
    try:
        return complex(math.ldexp(mant.real, exp), math.ldexp(mant.imag, exp))
    except OverflowError:
        return complex(math.copysign(math.inf, mant.real) if mant.real else 0.0,
                       math.copysign(math.inf, mant.imag) if mant.imag else 0.0)


def singularity_threshold(t: Tridiag, tol: float) -> float:
    """Scale-aware zero threshold for the determinant: tol * norm**size."""
    return tol * t.norm() ** t.size


def tridiag_null_vector(t: Tridiag, tol: float = 1e-10) -> np.ndarray:
    """Nonzero v with T v ~ 0, normalized so its largest-magnitude entry is 1.

    Raises NoNullVector when |det T| exceeds ``tol * norm**size``.
    """
    det = tridiag_det(t)
    scale = t.norm()
    if not abs(det) <= singularity_threshold(t, tol):
        raise NoNullVector(f"determinant {det} is not small relative to scale {scale}**{t.size}")
    a = t.dense()
    _, _, vh = np.linalg.svd(a)
    v = vh[-1].conj()
    v = v / v[np.argmax(np.abs(v))]
    if np.linalg.norm(a @ v) > 1e-8 * max(scale, 1e-300) * np.linalg.norm(v) and scale > 0:
        raise NoNullVector("smallest singular vector does not annihilate the matrix")
    return v
