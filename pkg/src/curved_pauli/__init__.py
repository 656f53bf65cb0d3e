"""Pauli-Coulomb bound states in constant-curvature spaces.

Nikiforov-Uvarov-type reduction to the Heun equation, candidate spectrum,
polynomial-existence determinants, and an independent finite-difference oracle.
"""
from .enu_core import (
    EnuReduction,
    HeunParams,
    SpectrumLine,
    SquareBranch,
    complete_square,
    h_n_poly,
    heun_params,
    quantize,
    reduce,
    schrodinger_spectrum,
    solve_level,
    spectrum,
)
from .fd_oracle import EigenReport, RadialProblem, compare, converged_levels, discretize, solve_levels
from .geometry import Channel, PhysParams, c_kappa, coulomb_energy, effective_potential, s_kappa, t_kappa
from .heun_poly import (
    PolySystem,
    build_system,
    delta1_closed_form,
    diagonal_discrepancy_record,
    existence_check,
    synthetic_check,
)
from .polyalg import ComplexPoly, Tridiag, perfect_square_root, tridiag_det, tridiag_null_vector
from .radial_model import Dimensionless, GeneralizedHeunODE, build_ode, make_dimensionless, ode_residual

__version__ = "0.1.0"
