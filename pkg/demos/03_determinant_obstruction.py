"""
Does the polynomial actually exist?
===================================

Quantization only removes the top equation of the coefficient system.  The
remaining (n+1)x(n+1) tridiagonal determinant must vanish too.  For n = 1 it
equals nu_bar (nu_bar + 2), which is never zero, so the degree-one candidates
have no polynomial behind them.
"""

import numpy as np

from curved_pauli import Channel, PhysParams
from curved_pauli.enu_core import spectrum
from curved_pauli.heun_poly import diagonal_discrepancy_record, existence_check

params = PhysParams.from_kappa_ab2(0.01)

# The n = 1 obstruction across channels
for two_j in (1, 3, 5):
    res = existence_check(params, Channel(two_j), 1)
    print(f"j={two_j}/2  n=1  det={res.determinant.real:g}  exists={res.exists}")

# Higher odd degrees at this curvature: determinants are large, not zero
for n in (3, 5, 7):
    res = existence_check(params, Channel(1), n)
    print(f"j=1/2  n={n}  |det|={abs(res.determinant):.3e}  exists={res.exists}")

# Scanning the coupling lam_bar along the hyperbolic (real) axis finds a zero
# of the n = 3 determinant at lam_bar = 9 sqrt(2), i.e. k a_B^2 = -2/81.
lams = np.linspace(8, 16, 9)
dets = [existence_check(PhysParams(kappa=-4 / lb**2), Channel(1), 3).determinant.real for lb in lams]
print("n=3 det along lam_bar:", np.round(dets, 1))
special = PhysParams(kappa=-4 / 162)
res = existence_check(special, Channel(1), 3)
print("at lam_bar = 9 sqrt(2): exists =", res.exists, " coefficients =", np.round(res.null_vector.real, 5))
line = spectrum(special, Channel(1), 3)[3]
print(f"...but A = {line.A.real:.3f} < 0, so the state is not normalizable: {line.reason}")

# The coefficient matrix is derived by applying the operator to monomials;
# its diagonal is q - 2m, and only that form reproduces the 2x2 determinant.
print(diagonal_discrepancy_record())
