"""
From the radial equation to a Heun equation
===========================================

With z = exp(i sqrt(k) r) the radial equation becomes an ODE with regular
singular points at 0, +1, -1 and infinity.  Completing a square and peeling
off a gauge factor z^A (z-1)^B (z+1)^C leaves sigma y'' + tau y' + h y = 0,
with h linear, which is Heun's equation in disguise.
"""

from curved_pauli.enu_core import heun_params, reduce, solve_level
from curved_pauli.radial_model import Dimensionless, build_ode

# A worked instance with small integers
d = Dimensionless(eps_bar=5, lam_bar=1, nu_bar=2)
print("sigma1 =", build_ode(d).sigma1)

red = reduce(d)
br = red.branch
print(f"square completion: a={br.a.real:g} b={br.b.real:g} c={br.c.real:g}  g0={br.g0.real:g} g1={br.g1.real:g}")
print(f"gauge exponents: A={red.A.real:g} B={red.B.real:g} C={red.C.real:g}")
print("pi  =", red.pi)
print("tau =", red.tau)

hp = heun_params(red, d)
print(f"Heun: gamma={hp.gamma.real:g} delta={hp.delta.real:g} eps={hp.epsH.real:g} "
      f"q={hp.q.real:g} alpha*beta={hp.alpha_beta.real:g}")
print("Fuchsian residual:", abs(hp.fuchsian_residual()))

# Quantization: asking the n-th derivative equation to close forces
# alpha*beta = -n(n+2+2a), which fixes eps_bar = lam_bar^2/N^2 + N^2/4.
lev = solve_level(2j, 2, 1)
print(f"n=1, lam_bar=2i: N={lev.N}, eps_bar={lev.eps_bar.real:g}, root picked: {lev.root_choice}")
