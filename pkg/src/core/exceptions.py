"""Custom exception hierarchy for dicke-sacs.

Every error raised by the surfaces, the optimizer and the exact oracle
derives from DickeSacsError, and carries the numerical context needed to
diagnose the failure without re-running the computation.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple


class DickeSacsError(Exception):
    """Base exception for all dicke-sacs errors.

    All custom exceptions inherit from this base class to allow
    catching all library errors with a single except clause.
    """
    pass


class DomainError(DickeSacsError, ValueError):
    """Argument outside the domain of an operation.

    Attributes:
        parameter: Name of the offending argument
        value: Offending value
    """

    def __init__(self, message: str, parameter: str, value: Any = None):
        """Initialize DomainError.

        Args:
            message: Human-readable error description
            parameter: Name of the offending argument
            value: Offending value (optional)
        """
        super().__init__(message)
        self.parameter = parameter
        self.value = value

    def __str__(self) -> str:
        """Format error message with parameter context."""
        base_msg = super().__str__()
        return f"{base_msg} ({self.parameter}={self.value!r})"


class PoleError(DomainError):
    """Stereographic coordinate evaluated at its pole (theta = pi).

    The caller must reparametrize; the search domain never reaches it.
    """
    pass


class NearSingularDomainError(DomainError):
    """SACS surface evaluated on the |cos(theta)| <= 1e-12 ring."""
    pass


class DegenerateStateError(DickeSacsError):
    """Symmetry-adapted state has (numerically) zero norm.

    Raised for the odd sector at or near the origin, where
    |alpha,zeta> - |-alpha,-zeta> vanishes.

    Attributes:
        norm_sq_inv: Value of the inverse squared normalization found
    """

    def __init__(self, message: str, norm_sq_inv: float):
        super().__init__(message)
        self.norm_sq_inv = norm_sq_inv

    def __str__(self) -> str:
        base_msg = super().__str__()
        return f"{base_msg} (N^-2={self.norm_sq_inv:.3e})"


class NumericalError(DickeSacsError):
    """Base class for failures of an iterative numerical procedure."""
    pass


class RefinementError(NumericalError):
    """No start of the multi-start refinement converged.

    Attributes:
        best_residual: Smallest gradient norm reached by any start
        starts: Number of starts attempted
    """

    def __init__(self, message: str, best_residual: float, starts: int):
        super().__init__(message)
        self.best_residual = best_residual
        self.starts = starts

    def __str__(self) -> str:
        base_msg = super().__str__()
        return (f"{base_msg} (best residual: {self.best_residual:.3e}, "
                f"starts: {self.starts})")


class NoTransitionError(NumericalError):
    """The global minimum stays in a single basin across the bracket.

    Attributes:
        bracket: (gamma_lo, gamma_hi) that was searched
    """

    def __init__(self, message: str, bracket: Tuple[float, float]):
        super().__init__(message)
        self.bracket = bracket

    def __str__(self) -> str:
        base_msg = super().__str__()
        lo, hi = self.bracket
        return f"{base_msg} (bracket: [{lo:.6g}, {hi:.6g}])"


class BasinTrackingError(NumericalError):
    """Basin identity lost while continuing minima in gamma.

    Attributes:
        gamma: Coupling at which tracking failed
        last_matched: (q, theta) points of the basins last identified
    """

    def __init__(self, message: str, gamma: float,
                 last_matched: Optional[Sequence[Tuple[float, float]]] = None):
        super().__init__(message)
        self.gamma = gamma
        self.last_matched = list(last_matched or [])

    def __str__(self) -> str:
        base_msg = super().__str__()
        points = ', '.join(f"(q={q:.6g}, theta={t:.6g})" for q, t in self.last_matched)
        return f"{base_msg} (gamma: {self.gamma:.6g}, last matched: [{points}])"


class TruncationConvergenceError(NumericalError):
    """Photon cutoff escalation hit its cap before converging.

    Attributes:
        nu_max: Largest cutoff tried
        gap: |E(nu_max) - E(nu_max / 2)| at the last step
    """

    def __init__(self, message: str, nu_max: int, gap: float):
        super().__init__(message)
        self.nu_max = nu_max
        self.gap = gap

    def __str__(self) -> str:
        base_msg = super().__str__()
        return f"{base_msg} (nu_max: {self.nu_max}, gap: {self.gap:.3e})"


class InsufficientCutoffError(NumericalError):
    """Coherent-state expansion leaks out of the truncated basis.

    Attributes:
        leakage: 1 - (truncated norm / exact norm)
        nu_max: Photon cutoff of the basis
    """

    def __init__(self, message: str, leakage: float, nu_max: int):
        super().__init__(message)
        self.leakage = leakage
        self.nu_max = nu_max

    def __str__(self) -> str:
        base_msg = super().__str__()
        return f"{base_msg} (leakage: {self.leakage:.3e}, nu_max: {self.nu_max})"


class LevelCrossingError(NumericalError):
    """Ground state is degenerate, so the fidelity is ill-defined.

    Attributes:
        gamma: Coupling where the degeneracy was detected
        splitting: Gap between the two lowest levels
    """

    def __init__(self, message: str, gamma: float, splitting: float):
        super().__init__(message)
        self.gamma = gamma
        self.splitting = splitting

    def __str__(self) -> str:
        base_msg = super().__str__()
        return f"{base_msg} (gamma: {self.gamma:.6g}, splitting: {self.splitting:.3e})"


class DimensionMismatchError(DickeSacsError, ValueError):
    """Amplitude vectors belong to different truncated bases."""

    def __init__(self, message: str, left: int, right: int):
        super().__init__(message)
        self.left = left
        self.right = right

    def __str__(self) -> str:
        base_msg = super().__str__()
        return f"{base_msg} ({self.left} != {self.right})"


class ConfigError(DickeSacsError):
    """Run configuration fails schema or semantic validation.

    Attributes:
        errors: List of validation error messages
        source: Where the bad configuration came from (file path, 'env', 'cli')
    """

    def __init__(self, message: str, errors: Optional[List[str]] = None,
                 source: Optional[str] = None):
        super().__init__(message)
        self.errors = errors or []
        self.source = source

    def __str__(self) -> str:
        base_msg = super().__str__()
        if self.source:
            base_msg = f"{base_msg} (source: {self.source})"
        if not self.errors:
            return base_msg
        error_list = '\n  - '.join(self.errors)
        return f"{base_msg}\nErrors:\n  - {error_list}"


def error_context(error: DickeSacsError) -> Dict[str, Any]:
    """Collect the structured attributes of an error for reports and logs."""
    context: Dict[str, Any] = {"type": type(error).__name__,
                               "message": Exception.__str__(error)}
    for key, value in vars(error).items():
        if isinstance(value, (int, float, str, list, tuple)) or value is None:
            context[key] = value
    return context
