"""Finite-difference eigensolver for the radial Pauli equation, independent of the Heun reduction.

The operator -d^2/dr^2 + W(r) is discretized with second-order central
differences on a uniform grid with Dirichlet conditions at both ends, giving a
symmetric tridiagonal matrix.  Its lowest eigenvalues are 2 m eps.  Errors are
O(h^2), so results on grids with h, h/2, h/4 are Richardson-extrapolated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .enu_core import SpectrumLine, pauli_energy, schrodinger_spectrum
from .errors import DomainError, SolverError
from .geometry import Channel, PhysParams, chart_limit, effective_potential


@dataclass(frozen=True)
class RadialProblem:
    """Discretized radial operator.

    ``r_min`` and ``r_max`` are the Dirichlet boundary positions; the potential is
    sampled at the ``n_points`` interior nodes r_min + i h, i = 1..n_points.
    """

    params: PhysParams
    channel: Channel
    r_min: float
    r_max: float
    n_points: int
    r: np.ndarray = field(repr=False)
    potential: np.ndarray = field(repr=False)

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points + 1)

    def diagonal(self) -> np.ndarray:
        return 2.0 / self.h**2 + self.potential

    def offdiagonal(self) -> np.ndarray:
        return np.full(self.n_points - 1, -1.0 / self.h**2)

    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal()) + np.diag(self.offdiagonal(), 1) + np.diag(self.offdiagonal(), -1)


def default_r_max(params: PhysParams, n_target: int = 1) -> float:
    """pi/sqrt(kappa) on the sphere, else max(60, 30 n_target) Bohr radii."""
    if params.kappa > 0:
        return chart_limit(params.kappa)
    return max(60.0, 30.0 * n_target) * params.a_B


def discretize(params: PhysParams, channel: Channel, h: float | None = None, r_max: float | None = None,
               *, n_intervals: int | None = None, r_min: float = 0.0, n_target: int = 1) -> RadialProblem:
    """Build the tridiagonal problem on [r_min, r_max] with spacing ~h (or exactly n_intervals cells)."""
    if r_max is None:
        r_max = default_r_max(params, n_target)
    if params.kappa > 0 and r_max > chart_limit(params.kappa) * (1 + 1e-12):
        raise DomainError(f"r_max = {r_max} exceeds the sphere's chart pi/sqrt(kappa) = {chart_limit(params.kappa)}")
    if not 0 <= r_min < r_max:
        raise DomainError(f"need 0 <= r_min < r_max, got {r_min}, {r_max}")
    if n_intervals is None:
        if h is None or h <= 0:
            raise DomainError("grid spacing must be positive")
        n_intervals = max(2, math.ceil((r_max - r_min) / h - 1e-9))
    n_points = n_intervals - 1
    step = (r_max - r_min) / n_intervals
    r = r_min + step * np.arange(1, n_points + 1)
    w = np.asarray(effective_potential(params, channel, r))
    if not np.all(np.isfinite(w)):
        raise DomainError("potential has a pole inside the grid")
    return RadialProblem(params, channel, r_min, r_max, n_points, r, w)


@dataclass(frozen=True)
class Level:
    index: int
    two_m_eps: float
    eps_over_ry: float


@dataclass(frozen=True)
class EigenReport:
    levels: list[Level]
    grid_h: float
    richardson_estimate: list[float] | None = None
    error_estimate: list[float] | None = None
    observed_order: list[float] | None = None
    grids: list[float] = field(default_factory=list)
    raw: list[list[float]] = field(default_factory=list)


def _lowest(diag, off, k):
    try:
        return eigh_tridiagonal(diag, off, eigvals_only=True, select="i",
                                select_range=(0, k - 1), lapack_driver="stebz")
    except (LinAlgError, ValueError) as exc:
        raise SolverError(f"tridiagonal eigensolver failed: {exc}",
                          {"n_points": len(diag), "k": k}) from exc


def solve_levels(problem: RadialProblem, k: int) -> EigenReport:
    """The k lowest eigenvalues of the discrete operator on a single grid."""
    if k < 1 or k >= problem.n_points // 2:
        raise DomainError(f"need 1 <= k << n_points, got k={k}, n_points={problem.n_points}")
    vals = _lowest(problem.diagonal(), problem.offdiagonal(), k)
    if len(vals) != k or not np.all(np.isfinite(vals)):
        raise SolverError("eigensolver returned an incomplete spectrum", {"returned": len(vals), "k": k})
    p = problem.params
    levels = [Level(i, float(v), float(v / (2 * p.mass * p.ry))) for i, v in enumerate(vals)]
    return EigenReport(levels, problem.h, grids=[problem.h], raw=[[lv.eps_over_ry for lv in levels]])


def count_below(problem: RadialProblem, two_m_eps: float) -> int:
    """Number of discrete eigenvalues below 2 m eps (Sturm count)."""
    vals = eigh_tridiagonal(problem.diagonal(), problem.offdiagonal(), eigvals_only=True,
                            select="v", select_range=(-np.inf, two_m_eps), lapack_driver="stebz")
    return len(vals)


def richardson(values: list[float], ratio: float = 2.0, order: float = 2.0) -> float:
    """Extrapolate the last two values of a sequence with error ~ h^order."""
    f = ratio**order
    return (f * values[-1] - values[-2]) / (f - 1)


def converged_levels(params: PhysParams, channel: Channel, k: int = 1, h: float = 0.04,
                     r_max: float | None = None, refinements: int = 2, n_target: int = 1) -> EigenReport:
    """Solve on h, h/2, ..., h/2^refinements and Richardson-extrapolate each level."""
    if refinements < 1:
        raise DomainError("Richardson extrapolation needs at least one refinement")
    if r_max is None:
        r_max = default_r_max(params, n_target)
    base = discretize(params, channel, h, r_max)
    n0 = base.n_points + 1
    raw, grids = [], []
    for i in range(refinements + 1):
        prob = base if i == 0 else discretize(params, channel, r_max=r_max, n_intervals=n0 * 2**i)
        rep = solve_levels(prob, k)
        raw.append([lv.eps_over_ry for lv in rep.levels])
        grids.append(prob.h)
    cols = list(zip(*raw))
    extrap = [richardson(list(c)) for c in cols]
    if refinements >= 2:
        prev = [richardson(list(c[:-1])) for c in cols]
        err = [abs(x - y) for x, y in zip(extrap, prev)]
        orders = [_order(c[-3], c[-2], c[-1]) for c in cols]
    else:
        err = [abs(x - c[-1]) for x, c in zip(extrap, cols)]
        orders = None
    return EigenReport(rep.levels, grids[-1], extrap, err, orders, grids, raw)


def _order(e1, e2, e3) -> float:
    d1, d2 = e1 - e2, e2 - e3
    if d2 == 0 or d1 / d2 <= 0:
        return math.nan
    return math.log2(d1 / d2)


def continuum_threshold(params: PhysParams) -> float:
    """Limit of eps as r -> infinity in hyperbolic space: -e^2 sqrt(|kappa|) (absolute energy)."""
    if params.kappa >= 0:
        return 0.0 if params.kappa == 0 else math.inf
    return -params.e2 * math.sqrt(-params.kappa)


def orbital_l(channel: Channel) -> int:
    """Effective orbital momentum l = j + parity/2 of the large component."""
    return (channel.two_j + channel.parity) // 2


@dataclass(frozen=True)
class ComparisonRow:
    level: int
    n_principal: int
    oracle: float
    err_est: float
    closed_form: float
    enu_candidate: bool
    schrodinger: float

    @property
    def dev_closed_form(self) -> float:
        return self.oracle - self.closed_form

    @property
    def dev_schrodinger(self) -> float:
        return self.oracle - self.schrodinger

    @property
    def rel_dev_closed_form(self) -> float:
        return self.dev_closed_form / abs(self.closed_form) if self.closed_form else math.inf

    @property
    def rel_dev_schrodinger(self) -> float:
        return self.dev_schrodinger / abs(self.schrodinger) if self.schrodinger else math.inf

    @property
    def geometric_shift(self) -> float:
        return self.closed_form - self.schrodinger


def compare(report: EigenReport, params: PhysParams, channel: Channel,
            spectrum_lines: list[SpectrumLine] | None = None) -> list[ComparisonRow]:
    """Pair oracle level k with principal number n = l + 1 + k and both closed forms (in Ry)."""
    if report.richardson_estimate is None:
        raise DomainError("comparison needs a Richardson-extrapolated report")
    accepted = {ln.n_principal for ln in spectrum_lines or [] if ln.accepted}
    l = orbital_l(channel)
    rows = []
    for k, (val, err) in enumerate(zip(report.richardson_estimate, report.error_estimate)):
        nbar = l + 1 + k
        rows.append(ComparisonRow(
            level=k, n_principal=nbar, oracle=val, err_est=err,
            closed_form=pauli_energy(params, 2 * nbar) / params.ry,
            enu_candidate=nbar in accepted if spectrum_lines is not None else False,
            schrodinger=schrodinger_spectrum(params, nbar) / params.ry,
        ))
    return rows
