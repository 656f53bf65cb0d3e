"""
Checking the closed forms against a direct eigensolver
======================================================

A second-order finite-difference discretization of the radial operator gives
reference levels independent of any Heun algebra.  Three grids (h, h/2, h/4)
are combined by Richardson extrapolation.
"""

from curved_pauli import Channel, PhysParams
from curved_pauli.enu_core import spectrum
from curved_pauli.fd_oracle import compare, continuum_threshold, converged_levels

# Flat-space calibration: hydrogen 1s and 2p
flat = PhysParams(kappa=0.0)
for parity in (-1, 1):
    rep = converged_levels(flat, Channel(1, parity), k=1, h=0.04, r_max=60.0)
    print(f"flat, parity {parity:+d}: {rep.richardson_estimate[0]:.9f} Ry, observed order {rep.observed_order[0]:.3f}")

# Curved space: oracle vs candidate closed form vs the Schroedinger baseline
for kab2 in (0.01, -0.01):
    params = PhysParams.from_kappa_ab2(kab2)
    note = f", continuum starts at {continuum_threshold(params) / params.ry:.3f} Ry" if kab2 < 0 else ""
    print(f"\nk a_B^2 = {kab2}{note}")
    for parity in (1, -1):
        ch = Channel(1, parity)
        rows = compare(converged_levels(params, ch, k=2), params, ch, spectrum(params, ch, 5))
        for r in rows:
            print(f"  parity {parity:+d} n={r.n_principal}: oracle {r.oracle:+.6f}  closed form {r.closed_form:+.5f}"
                  f"  baseline {r.schrodinger:+.5f}  shift {r.geometric_shift:.3f}")

# The two parities bracket the closed form at the same principal number:
p = PhysParams.from_kappa_ab2(0.01)
lv = {par: converged_levels(p, Channel(1, par), k=2).richardson_estimate for par in (1, -1)}
print(f"\nn=2 parity average {(lv[1][0] + lv[-1][1]) / 2:.6f} Ry vs closed form -0.21 Ry")
