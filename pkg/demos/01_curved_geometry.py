"""
Radial geometry on spheres and hyperbolic spaces
================================================

The generalized sine S_k and cosine C_k interpolate between sin/cos (k > 0),
the flat r/1 pair (k = 0) and sinh/cosh (k < 0).  Everything in the radial
equation is built from them.
"""

import numpy as np

from curved_pauli import Channel, PhysParams
from curved_pauli.geometry import c_kappa, chart_limit, effective_potential, s_kappa

# The three regimes on a common grid
r = np.linspace(0.1, 2.5, 6)
for kappa in (1.0, 0.0, -1.0):
    print(f"kappa={kappa:+.0f}  S={np.round(s_kappa(kappa, r), 4)}")

# The Pythagorean identity C^2 + k S^2 = 1 holds in every regime
for kappa in (0.7, -0.7):
    s, c = s_kappa(kappa, r), c_kappa(kappa, r)
    print(f"kappa={kappa:+.1f}  max |C^2 + k S^2 - 1| = {np.max(np.abs(c**2 + kappa * s**2 - 1)):.1e}")

# On the sphere the chart ends at the antipode r = pi / sqrt(k), where the
# Coulomb term -e^2 C/S has a second (repulsive) pole.
params = PhysParams.from_kappa_ab2(0.04)
print("chart limit in Bohr radii:", chart_limit(params.kappa) / params.a_B)

# Effective potential of the two parity channels with j = 1/2: they differ
# only in the sign of the C/S^2 spin term.
grid = np.linspace(0.5, 10, 5)
for parity in (1, -1):
    w = effective_potential(params, Channel(1, parity), grid)
    print(f"parity {parity:+d}: W(r) = {np.round(w, 4)}")
