"""Randomized property suites run by ``curved-pauli verify``.

Each check uses a fixed seed so the command is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
import cmath
import math

import numpy as np

from . import enu_core, fd_oracle, geometry, heun_poly, polyalg, radial_model
from .geometry import Channel, PhysParams
from .polyalg import ComplexPoly, Tridiag
from .radial_model import Dimensionless


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _rand_complex(rng, radius, size=None):
    r = radius * np.sqrt(rng.uniform(0, 1, size))
    t = rng.uniform(0, 2 * np.pi, size)
    return r * np.exp(1j * t)


def check_pythagorean(rng) -> CheckResult:
    worst = 0.0
    for kappa in (-4.0, -0.3, -1e-9, 0.0, 1e-9, 0.5, 2.0):
        hi = geometry.chart_limit(kappa) if kappa > 0 else 5.0
        r = rng.uniform(0, hi * 0.999, 200)
        s, c = geometry.s_kappa(kappa, r), geometry.c_kappa(kappa, r)
        worst = max(worst, float(np.max(np.abs(c**2 + kappa * s**2 - 1) / (c**2 + abs(kappa) * s**2))))
    return CheckResult("geometry: C^2 + kappa S^2 = 1", worst <= 1e-12, f"max residual {worst:.2e}")


def check_derivatives(rng) -> CheckResult:
    worst = 0.0
    h = 1e-5
    for kappa in (-2.0, -0.1, 0.0, 0.1, 2.0):
        hi = geometry.chart_limit(kappa) if kappa > 0 else 3.0
        r = rng.uniform(0.1, hi * 0.9, 50)
        ds = (geometry.s_kappa(kappa, r + h) - geometry.s_kappa(kappa, r - h)) / (2 * h)
        dc = (geometry.c_kappa(kappa, r + h) - geometry.c_kappa(kappa, r - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(ds - geometry.c_kappa(kappa, r)))),
                    float(np.max(np.abs(dc + kappa * geometry.s_kappa(kappa, r)))))
    return CheckResult("geometry: S' = C, C' = -kappa S", worst <= 1e-8, f"max error {worst:.2e}")


def check_perfect_square(rng) -> CheckResult:
    fails = 0
    for _ in range(1000):
        deg = rng.integers(0, 3)
        s = ComplexPoly(_rand_complex(rng, 1.0, deg + 1))
        if s.degree() < 0:
            continue
        root = polyalg.perfect_square_root(s * s)
        if root is None or not (root.allclose(s, 1e-8) or root.allclose(-s, 1e-8)):
            fails += 1
    return CheckResult("polyalg: perfect_square_root(s^2) = +/-s", fails == 0, f"{fails} failures / 1000")


def check_tridiag_det(rng) -> CheckResult:
    worst = 0.0
    for _ in range(200):
        n = rng.integers(0, 7)
        t = Tridiag(_rand_complex(rng, 2, n), _rand_complex(rng, 2, n + 1), _rand_complex(rng, 2, n))
        ref = np.linalg.det(t.dense())
        worst = max(worst, abs(polyalg.tridiag_det(t) - ref) / max(1.0, abs(ref)))
    return CheckResult("polyalg: recurrence determinant = dense determinant", bool(worst <= 1e-10), f"{worst:.2e}")


def check_sigma3(rng) -> CheckResult:
    fails = 0
    for _ in range(500):
        d = Dimensionless(complex(_rand_complex(rng, 10)), complex(_rand_complex(rng, 10)), int(rng.integers(2, 13)))
        for label in (1, 2):
            br = enu_core.complete_square(d, label, enu_core.LOWER)
            s3 = enu_core.sigma3_from_g(d, br.g0, br.g1)
            if not s3.allclose(br.square() ** 2, 1e-10):
                fails += 1
    return CheckResult("enu: sigma3 = (a z^2 + b z + c)^2 (labels 1, 2)", fails == 0, f"{fails} failures")


def check_fuchsian(rng) -> CheckResult:
    worst = 0.0
    for _ in range(500):
        d = Dimensionless(complex(_rand_complex(rng, 10)), complex(_rand_complex(rng, 10)), int(rng.integers(2, 13)))
        red = enu_core.reduction_from_branch(d, enu_core.complete_square(d))
        hp = enu_core.heun_params(red, d)
        worst = max(worst, abs(hp.fuchsian_residual()) / max(1.0, abs(hp.alpha) + abs(hp.beta)))
    return CheckResult("enu: Fuchsian relation", worst <= 1e-10, f"{worst:.2e}")


def check_quantization(rng) -> CheckResult:
    fails = 0
    for n in range(11):
        for _ in range(20):
            a = complex(_rand_complex(rng, 5))
            c = complex(_rand_complex(rng, 5))
            tau = heun_poly.tau_default(a, c)
            on = enu_core.quantized_alpha_beta(a, n)
            for ab, should_vanish in ((on, True), (on + complex(_rand_complex(rng, 1)) + 0.1, False)):
                hn = enu_core.derivative_coefficients(heun_poly.SIGMA, tau, heun_poly.h_linear(ab, 0.3), n)[2]
                vanishes = hn.scale() <= 1e-10 * (abs(ab) + n * n + abs(a) * n + 1)
                fails += vanishes != should_vanish
    return CheckResult("enu: h_n = 0 iff alpha*beta = -n(n+2+2a)", fails == 0, f"{fails} failures")


def check_delta1() -> CheckResult:
    p = PhysParams.from_kappa_ab2(0.01)
    bad = []
    for nb in range(2, 21, 2):
        det = heun_poly.existence_check(p, Channel(nb - 1, 1), 1).determinant
        if abs(det - nb * (nb + 2)) > 1e-10 * nb * (nb + 2):
            bad.append(nb)
    return CheckResult("heun_poly: n=1 determinant = nu_bar (nu_bar + 2)", not bad, f"bad nu_bar: {bad}")


def check_discrepancy() -> CheckResult:
    rec = heun_poly.diagonal_discrepancy_record()
    ok = rec["derived_diagonal"] == "q-2m" and rec["delta1_consistent_with"] == "q-2m"
    return CheckResult("heun_poly: derived diagonal is q - 2m", ok, rec["derived_diagonal"])


def check_accepted_n(rng) -> CheckResult:
    ref = None
    ok = True
    for _ in range(6):
        kab2 = float(rng.choice([-1, 1])) * 10 ** rng.uniform(-3, -1)
        p = PhysParams.from_kappa_ab2(kab2, mass=float(rng.uniform(0.5, 2)), e2=float(rng.uniform(0.5, 2)))
        for two_j in (1, 3, 5):
            acc = tuple(ln.n for ln in enu_core.spectrum(p, Channel(two_j, 1), 8) if ln.reason != enu_core.REASON_PARITY)
            ok &= acc == (1, 3, 5, 7)
    return CheckResult("enu: single-valued n are the odd n", ok)


def check_oracle_flat() -> CheckResult:
    p = PhysParams.from_kappa_ab2(0.0)
    errs = []
    for parity, target in ((-1, -1.0), (1, -0.25)):
        rep = fd_oracle.converged_levels(p, Channel(1, parity), 1, h=0.04, r_max=60.0)
        errs.append(abs(rep.richardson_estimate[0] - target) / abs(target))
    return CheckResult("fd_oracle: flat hydrogen 1s / 2p", bool(max(errs) <= 1e-4), f"rel errors {errs}")


def run_all(seed: int = 20240501) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        check_pythagorean(rng),
        check_derivatives(rng),
        check_perfect_square(rng),
        check_tridiag_det(rng),
        check_sigma3(rng),
        check_fuchsian(rng),
        check_quantization(rng),
        check_delta1(),
        check_discrepancy(),
        check_accepted_n(rng),
        check_oracle_flat(),
    ]
