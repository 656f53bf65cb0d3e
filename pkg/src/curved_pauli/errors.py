"""Exception hierarchy shared by all modules."""


class CurvedPauliError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CurvedPauliError, ValueError):
    """Argument outside the radial chart or violating a precondition."""


class PoleError(DomainError):
    """Evaluation at a singular point of a potential or function."""


class FlatSpaceUnsupported(DomainError):
    """The z = exp(i sqrt(kappa) r) reduction needs kappa != 0."""


class ContractError(CurvedPauliError, ValueError):
    """Input violates a structural contract (degree, shape, singular point)."""


class InconsistentBranch(CurvedPauliError):
    """A square-completion branch fails its defining coefficient relations."""


class NoAdmissibleBranch(CurvedPauliError):
    """No branch satisfies the regularity (positivity) filter."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class BranchSignMismatch(CurvedPauliError):
    """Back-substitution of a quantized energy failed for both root signs."""


class NoNullVector(CurvedPauliError):
    """The tridiagonal matrix is not singular at the requested tolerance."""


class InternalConsistencyError(CurvedPauliError, AssertionError):
    """Two independent routes to the same quantity disagree (a bug)."""


class SolverError(CurvedPauliError, RuntimeError):
    """The eigenvalue solver failed; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
