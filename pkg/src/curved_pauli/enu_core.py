"""Nikiforov-Uvarov-type gauge reduction of the generalized Heun equation.

Pipeline for fixed dimensionless data (eps_bar, lam_bar, nu_bar):

1. ``complete_square`` picks one of the four (a + c, b) options and a sign for
   c = +/- sqrt(eps_bar - lam_bar), then solves g0, g1 so that
   sigma3 = (a z^2 + b z + c)^2.
2. ``reduce`` builds the gauge polynomial pi, tau = pi1 + 2 pi and the linear h of
   sigma y'' + tau y' + h y = 0, with exponents f = z^A (z-1)^B (z+1)^C y.
3. ``heun_params`` reads off the standard Heun parameters.
4. ``quantize``/``spectrum`` impose h_n == 0 for a degree-n polynomial y.

Sign convention: ``sign = -1`` is the "lower" choice, pi = -z^2 - (a z^2 + b z + c),
and ``sign = +1`` the "upper" one.  In both cases c = sign * root, so the
exponent at z = 0 is A = root.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import cmath
import math

from .errors import (
    BranchSignMismatch,
    ContractError,
    DomainError,
    FlatSpaceUnsupported,
    InconsistentBranch,
    InternalConsistencyError,
    NoAdmissibleBranch,
)
from .geometry import Channel, PhysParams
from .polyalg import ComplexPoly, perfect_square_root
from .radial_model import Dimensionless, build_ode, eps_from_eps_bar, lam_bar as _lam_bar

RTOL = 1e-10
LOWER, UPPER = -1, 1
DEFAULT_BRANCH = (1, LOWER)
ALTERNATE_BRANCH = (2, UPPER)
_BRANCH_ORDER = [(1, LOWER), (2, UPPER), (1, UPPER), (2, LOWER),
                 (3, LOWER), (3, UPPER), (4, LOWER), (4, UPPER)]

REASON_PARITY = "not-single-valued"
REASON_BRANCH = "no-admissible-branch"


def _close(x: complex, y: complex, rtol: float = RTOL, *scale: complex) -> bool:
    ref = max([1.0, abs(x), abs(y)] + [abs(s) for s in scale])
    return abs(x - y) <= rtol * ref


def label_sums(label: int, nu_bar: int) -> tuple[int, int]:
    """(a + c, b) for the four square-completion options."""
    options = {1: (nu_bar, 1), 2: (-nu_bar, -1), 3: (1, nu_bar), 4: (-1, -nu_bar)}
    if label not in options:
        raise ContractError(f"branch label must be 1..4, got {label}")
    return options[label]


def exponents_bc(label: int, sign: int, nu_bar: int) -> tuple[float, float]:
    """Gauge exponents B (at z = 1) and C (at z = -1); they do not depend on the energy."""
    s_ac, b = label_sums(label, nu_bar)
    return (1 - sign * (s_ac + b)) / 2, (1 - sign * (s_ac - b)) / 2


def admissible_branches(nu_bar: int) -> list[tuple[int, int]]:
    """(label, sign) pairs with B > 0 and C > 0, in preference order."""
    out = []
    for label, sign in _BRANCH_ORDER:
        B, C = exponents_bc(label, sign, nu_bar)
        if B > 0 and C > 0:
            out.append((label, sign))
    return out


@dataclass(frozen=True)
class SquareBranch:
    label: int
    sign: int
    a: complex
    b: complex
    c: complex
    g0: complex
    g1: complex
    restricts_nu: bool = False

    def square(self) -> ComplexPoly:
        return ComplexPoly([self.c, self.b, self.a])


def sigma3_from_g(d: Dimensionless, g0: complex, g1: complex) -> ComplexPoly:
    """sigma3 written out in terms of (g0, g1)."""
    e, lam, nb = d.eps_bar, d.lam_bar, d.nu_bar
    return ComplexPoly([e - lam, nb + g0, nb * nb - 2 * e + g1, nb - g0, 1 + lam + e - g1])


def sigma3_from_ode(d: Dimensionless, g0: complex, g1: complex) -> ComplexPoly:
    """sigma3 = ((sigma' - pi1)/2)^2 - sigma1 + g sigma, from the ODE polynomials."""
    ode = build_ode(d)
    u = (ode.sigma.derivative() - ode.pi1).scaled(0.5)
    return u * u - ode.sigma1 + ComplexPoly([g0, g1]) * ode.sigma


def complete_square(d: Dimensionless, label: int = 1, sign: int = LOWER,
                    root: complex | None = None) -> SquareBranch:
    """Solve for (a, b, c, g0, g1) on one square-completion branch.

    ``root`` is the square root of eps_bar - lam_bar to use (principal by default);
    c = sign * root.
    """
    if abs(d.nu_bar) < 2:
        raise DomainError(f"|nu_bar| must be >= 2, got {d.nu_bar}")
    if sign not in (LOWER, UPPER):
        raise ContractError("sign must be +1 or -1")
    e, lam, nb = d.eps_bar, d.lam_bar, d.nu_bar
    diff = e - lam
    if abs(diff) <= 1e-14 * max(1.0, abs(e), abs(lam)):
        raise DomainError("eps_bar - lam_bar = 0 degenerates the branch system (c = 0)")
    if root is None:
        root = cmath.sqrt(diff)
    elif not _close(root * root, diff):
        raise ContractError(f"root**2 = {root * root} does not match eps_bar - lam_bar = {diff}")
    s_ac, b = label_sums(label, nb)
    c = sign * root
    a = s_ac - c
    g0 = nb - 2 * a * b
    g1 = 1 + lam + e - a * a
    branch = SquareBranch(label, sign, a, b, c, g0, g1, restricts_nu=label in (3, 4))

    relations = [
        (a * a, 1 + lam + e - g1),
        (b * b + 2 * a * c, nb * nb - 2 * e + g1),
        (2 * a * b, nb - g0),
        (2 * b * c, nb + g0),
        (c * c, e - lam),
        ((a + c) ** 2 + b * b, 1 + nb * nb),
        ((a + c) * b, nb),
    ]
    bad = [i for i, (x, y) in enumerate(relations) if not _close(x, y, RTOL, e, lam, nb * nb)]
    if bad:
        raise InconsistentBranch(f"label {label}, sign {sign}: coefficient relations {bad} violated")
    s3 = sigma3_from_g(d, g0, g1)
    if not s3.allclose(branch.square() ** 2, RTOL) or not s3.allclose(sigma3_from_ode(d, g0, g1), RTOL):
        raise InconsistentBranch(f"label {label}, sign {sign}: sigma3 is not (a z^2 + b z + c)^2")
    return branch


@dataclass(frozen=True)
class EnuReduction:
    """Gauge data of f = z^A (z-1)^B (z+1)^C y with sigma y'' + tau y' + h y = 0."""

    branch: SquareBranch
    A: complex
    B: complex
    C: complex
    pi: ComplexPoly
    tau: ComplexPoly
    h: ComplexPoly
    sigma: ComplexPoly = field(default_factory=lambda: ComplexPoly([0, 1, 0, -1]))

    @property
    def sign(self) -> int:
        return self.branch.sign

    def is_regular(self) -> bool:
        return self.B.real > 0 and self.C.real > 0

    def gauge_factor(self, z: complex) -> complex:
        return z**self.A * (z - 1) ** self.B * (z + 1) ** self.C

    def gauge_log_derivative(self, z: complex) -> complex:
        return self.A / z + self.B / (z - 1) + self.C / (z + 1)


def reduction_from_branch(d: Dimensionless, branch: SquareBranch) -> EnuReduction:
    """Build pi, tau, h and the exponents for an already-solved branch."""
    s = branch.sign
    a, b, c = branch.a, branch.b, branch.c
    ode = build_ode(d)
    pi = ComplexPoly([0, 0, -1]) + branch.square().scaled(s)
    tau = ode.pi1 + pi.scaled(2)
    h = ComplexPoly([branch.g0, branch.g1]) + pi.derivative()
    A = s * c
    B = (1 - s * (a + b + c)) / 2
    C = (1 - s * (a + c - b)) / 2

    terms = [ode.sigma1, pi * pi, pi * (ode.pi1 - ode.sigma.derivative()), pi.derivative() * ode.sigma]
    sigma2 = terms[0] + terms[1] + terms[2] + terms[3]
    ref = max(t.scale() for t in terms)
    if (sigma2 - ode.sigma * h).scale() > RTOL * max(ref, 1.0):
        raise InternalConsistencyError("sigma2 != sigma * h for the solved branch")
    # tau/sigma partial fractions: residue at a simple root z0 of sigma is tau(z0)/sigma'(z0)
    dsig = ode.sigma.derivative()
    for z0, expected in ((0, 2 * A + 1), (1, 2 * B), (-1, 2 * C)):
        if not _close(tau(z0) / dsig(z0), expected):
            raise InternalConsistencyError(f"tau/sigma residue at z={z0} disagrees with the exponents")
    return EnuReduction(branch, A, B, C, pi, tau, h)


def _infer_hyperbolic(d: Dimensionless) -> bool:
    # kappa < 0 makes lam_bar real positive; kappa > 0 makes it imaginary
    return d.lam_bar.real > 0 and abs(d.lam_bar.imag) <= 1e-14 * abs(d.lam_bar)


def reduce(d: Dimensionless, label: int | None = None, sign: int | None = None, *,
           alternate: bool = False, root: complex | None = None,
           hyperbolic: bool | None = None, fallback: bool = True) -> EnuReduction:
    """Reduce the generalized Heun ODE to sigma y'' + tau y' + h y = 0.

    The default path is label 1 with lower signs; ``alternate=True`` selects label 2
    with upper signs.  If the requested branch is not regular (B, C > 0, and A > 0 in
    the hyperbolic case) and ``fallback`` is set, the remaining branches are tried in
    a fixed order.
    """
    if label is None or sign is None:
        label, sign = ALTERNATE_BRANCH if alternate else DEFAULT_BRANCH
    if hyperbolic is None:
        hyperbolic = _infer_hyperbolic(d)
    candidates = [(label, sign)] + ([x for x in _BRANCH_ORDER if x != (label, sign)] if fallback else [])
    diagnostics = []
    for lab, sg in candidates:
        try:
            red = reduction_from_branch(d, complete_square(d, lab, sg, root))
        except InconsistentBranch as exc:
            diagnostics.append({"label": lab, "sign": sg, "error": str(exc)})
            continue
        ok = red.is_regular() and (not hyperbolic or red.A.real > 0)
        if ok:
            return red
        diagnostics.append({"label": lab, "sign": sg, "A": red.A, "B": red.B, "C": red.C})
    raise NoAdmissibleBranch("no square-completion branch gives regular exponents", diagnostics)


@dataclass(frozen=True)
class HeunParams:
    gamma: complex
    delta: complex
    epsH: complex
    alpha: complex
    beta: complex
    q: complex

    @property
    def alpha_beta(self) -> complex:
        return self.alpha * self.beta

    def fuchsian_residual(self) -> complex:
        return self.epsH - (self.alpha + self.beta - self.gamma - self.delta + 1)


def heun_params(red: EnuReduction, d: Dimensionless) -> HeunParams:
    """Standard Heun parameters (gamma, delta, eps, alpha, beta, q).

    alpha and beta come from the closed form 1 - s a -/+ sqrt(eps_bar + lam_bar) and
    are cross-checked against alpha*beta = -h'(z) and the Fuchsian relation.
    """
    s, a = red.sign, red.branch.a
    gamma, delta, epsH = 2 * red.A + 1, 2 * red.B, 2 * red.C
    root_plus = cmath.sqrt(d.eps_bar + d.lam_bar)
    alpha = 1 - s * a - root_plus
    beta = 1 - s * a + root_plus
    q = red.h.coeff(0)
    hp = HeunParams(gamma, delta, epsH, alpha, beta, q)

    scale = max(abs(gamma), abs(delta), abs(epsH), abs(alpha), abs(beta))
    if not _close(hp.fuchsian_residual(), 0, RTOL, scale):
        raise InternalConsistencyError(f"Fuchsian residual {hp.fuchsian_residual()}")
    # alpha*beta and h1 both arise from differences of O(|eps_bar| + |a|^2) terms
    ab_scale = abs(alpha) * abs(beta) + abs(d.eps_bar) + abs(d.lam_bar) + abs(a) ** 2
    if not _close(alpha * beta, -red.h.coeff(1), RTOL, ab_scale):
        raise InternalConsistencyError("alpha*beta disagrees with the linear coefficient of h")
    if (red.branch.label, s) == DEFAULT_BRANCH:
        # q = -1 - nu_bar - 2 sqrt(eps_bar - lam_bar), with sqrt = -c = A
        if not _close(q, -1 - d.nu_bar - 2 * red.A):
            raise InternalConsistencyError("accessory parameter disagrees with its closed form")
    return hp


def derivative_coefficients(sigma: ComplexPoly, tau: ComplexPoly, h: ComplexPoly, n: int):
    """(mu_n, tau_n, h_n) of the third-order equation satisfied by y^(n), closed form."""
    k = n + 1
    mu_n = tau + sigma.derivative().scaled(k)
    tau_n = tau.derivative().scaled(k) + sigma.derivative(2).scaled(n * k / 2) + h
    h_n = (h.derivative().scaled(k) + tau.derivative(2).scaled(n * k / 2)
           + sigma.derivative(3).scaled(n * k * (n - 1) / 6))
    return mu_n, tau_n, h_n


def derivative_coefficients_recursive(sigma: ComplexPoly, tau: ComplexPoly, h: ComplexPoly, n: int):
    """Same triple built by differentiating step by step from n = 0."""
    mu = tau + sigma.derivative()
    tn = tau.derivative() + h
    hn = h.derivative()
    for _ in range(n):
        mu, tn, hn = mu + sigma.derivative(), tn + mu.derivative(), hn + tn.derivative()
    return mu, tn, hn


def h_n_poly(red: EnuReduction, n: int) -> ComplexPoly:
    """h_n for the reduced equation; both constructions must agree."""
    if n < 0:
        raise ContractError("n must be >= 0")
    direct = derivative_coefficients(red.sigma, red.tau, red.h, n)
    recur = derivative_coefficients_recursive(red.sigma, red.tau, red.h, n)
    ref = (red.sigma.scale() + red.tau.scale() + red.h.scale()) * (n + 1) ** 3
    for x, y in zip(direct, recur):
        if (x - y).scale() > RTOL * max(ref, x.scale(), y.scale()):
            raise InternalConsistencyError(f"closed-form and recursive derivative coefficients differ at n={n}")
    return direct[2]


def quantized_alpha_beta(a: complex, n: int, sign: int = LOWER) -> complex:
    """alpha*beta making h_n vanish: -n (n + 2 - 2 s a); for lower signs -n (n + 2 + 2a)."""
    return -n * (n + 2 - 2 * sign * a)


def quantum_number(nu_bar: int, n: int, label: int = 1, sign: int = LOWER) -> int:
    """N with eps_bar + lam_bar = (N + root)^2; N = 1 + n + nu_bar on the default branch."""
    s_ac, _ = label_sums(label, nu_bar)
    return 1 + n - sign * s_ac


@dataclass(frozen=True)
class QuantizedLevel:
    n: int
    N: int
    eps_bar: complex
    root: complex
    root_choice: str  # "principal" or "negated"
    dimensionless: Dimensionless
    reduction: EnuReduction
    heun: HeunParams


def quantize(lam_bar: complex, nu_bar: int, n: int, label: int = 1, sign: int = LOWER) -> complex:
    """eps_bar = lam_bar^2/N^2 + N^2/4 for a degree-n polynomial, back-substitution checked."""
    return solve_level(lam_bar, nu_bar, n, label, sign).eps_bar


def solve_level(lam_bar: complex, nu_bar: int, n: int, label: int = 1, sign: int = LOWER) -> QuantizedLevel:
    """Quantize, pick the square-root sign fixed by the quantization relation, verify h_n == 0."""
    if n < 0:
        raise ContractError("n must be >= 0")
    if abs(nu_bar) < 2:
        raise DomainError(f"|nu_bar| must be >= 2, got {nu_bar}")
    N = quantum_number(nu_bar, n, label, sign)
    if N == 0:
        raise DomainError(f"quantum number vanishes for label {label}, sign {sign}, n={n}")
    eps_bar = lam_bar**2 / N**2 + N**2 / 4
    target = (2 * lam_bar - N**2) / (2 * N)
    principal = cmath.sqrt(eps_bar - lam_bar)
    d = Dimensionless(eps_bar, lam_bar, nu_bar)

    tried = []
    for choice, root in (("principal", principal), ("negated", -principal)):
        if not _close(root, target, 1e-9, eps_bar, lam_bar):
            tried.append(choice)
            continue
        red = reduction_from_branch(d, complete_square(d, label, sign, root=root))
        hp = heun_params(red, d)
        hn = h_n_poly(red, n)
        scale = (abs(hp.alpha_beta) + abs(quantized_alpha_beta(red.branch.a, n, sign)) + 1
                 + abs(eps_bar) + abs(lam_bar) + abs(red.branch.a) ** 2)
        if hn.scale() > RTOL * scale * (n + 1):
            raise BranchSignMismatch(f"h_{n} = {hn} does not vanish at the quantized energy")
        return QuantizedLevel(n, N, eps_bar, root, choice, d, red, hp)
    raise BranchSignMismatch(f"neither root of eps_bar - lam_bar matches {target} (tried {tried})")


@dataclass(frozen=True)
class SpectrumLine:
    n: int
    N: int
    n_principal: int | None
    eps_over_ry: float
    accepted: bool
    reason: str | None = None
    label: int = 1
    sign: int = LOWER
    A: complex = 0j
    root_choice: str = ""
    polynomial_exists: bool | None = None
    determinant: complex | None = None


def pauli_energy(params: PhysParams, N: int | float) -> float:
    """Closed-form candidate Ry [-4/N^2 + N^2 kappa a_B^2 / 4] (absolute energy)."""
    return params.ry * (-4.0 / N**2 + N**2 * params.kappa_ab2 / 4.0)


def schrodinger_spectrum(params: PhysParams, n_principal: int) -> float:
    """Spinless Schroedinger level Ry [-1/n^2 + (n^2 - 1) kappa a_B^2] (absolute energy)."""
    if n_principal < 1:
        raise DomainError("principal quantum number must be >= 1")
    n2 = n_principal**2
    return params.ry * (-1.0 / n2 + n2 * params.kappa_ab2) - params.kappa / (2 * params.mass)


def spectrum(params: PhysParams, channel: Channel, n_max: int,
             label: int | None = None, sign: int | None = None) -> list[SpectrumLine]:
    """Candidate levels for n = 0..n_max; rejected lines are kept with a reason.

    The branch defaults to the first regular one for the channel's signed nu_bar
    (label 1 / lower signs for parity +1).
    """
    if params.kappa == 0:
        raise FlatSpaceUnsupported("the candidate spectrum needs kappa != 0; use the oracle for flat space")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    nb = channel.signed_nu_bar
    if label is None or sign is None:
        options = admissible_branches(nb)
        if not options:
            raise NoAdmissibleBranch(f"no regular branch for nu_bar = {nb}")
        label, sign = options[0]
    lb = _lam_bar(params)
    hyperbolic = params.kappa < 0
    lines = []
    for n in range(n_max + 1):
        lev = solve_level(lb, nb, n, label, sign)
        eps = eps_from_eps_bar(params, lev.eps_bar)
        if abs(eps.imag) > 1e-9 * max(1.0, abs(eps)):
            raise InternalConsistencyError(f"complex energy {eps} for real curvature")
        eps_ry = eps.real / params.ry
        closed = pauli_energy(params, lev.N) / params.ry
        if not math.isclose(eps_ry, closed, rel_tol=1e-9, abs_tol=1e-12):
            raise InternalConsistencyError(f"pipeline energy {eps_ry} != closed form {closed}")
        reason = None
        if lev.N % 2:
            reason = REASON_PARITY
        elif hyperbolic and not lev.reduction.A.real > 0:
            reason = REASON_BRANCH
        lines.append(SpectrumLine(
            n=n, N=lev.N, n_principal=None if reason else lev.N // 2, eps_over_ry=eps_ry,
            accepted=reason is None, reason=reason, label=label, sign=sign,
            A=lev.reduction.A, root_choice=lev.root_choice,
        ))
    return lines


def square_root_check(red: EnuReduction, d: Dimensionless) -> bool:
    """perfect_square_root(sigma3) reproduces +/-(a z^2 + b z + c)."""
    s3 = sigma3_from_g(d, red.branch.g0, red.branch.g1)
    root = perfect_square_root(s3)
    if root is None:
        return False
    sq = red.branch.square()
    return root.allclose(sq) or root.allclose(-sq)
