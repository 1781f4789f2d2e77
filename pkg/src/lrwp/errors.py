"""Exception types shared across the package."""


class LrwpError(Exception):
    """Base class for every package-specific failure."""


class OutOfDomainError(LrwpError):
    """Evaluation time lies outside a tabulated profile's domain."""


class QuadratureError(LrwpError):
    """Adaptive quadrature could not reach the requested tolerance.

    ``residual`` holds the error estimate that was actually achieved.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class PositionBranchError(LrwpError):
    """A0 = 0 selects position eigenfunctions, which this solver does not support."""


class UnphysicalInvariantError(LrwpError):
    """Im(F0) > 0 makes the packet density non-normalizable."""


class DivergentDensityError(LrwpError):
    """Im(F0) = 0 with F0 != 0: the density diverges at t = m/F0."""


class ModeMismatchError(LrwpError):
    """Operation invoked on a packet of the wrong kind (wave packet vs plane wave)."""


class SingularIntegrandError(LrwpError):
    """A(t) crosses zero inside an integration range."""


class InstabilityError(LrwpError):
    """Propagation norm drifted beyond tolerance."""


class AliasingError(LrwpError):
    """Wave amplitude at the grid boundary exceeded the allowed level."""


class ContainmentError(LrwpError):
    """Grid box cannot contain the packet over the requested time span."""


class DegenerateFieldError(LrwpError):
    """Field with (numerically) zero norm."""


class AcceptanceViolation(LrwpError):
    """A validation run finished but violated one of its quality thresholds.

    ``summary`` carries the run's measured figures (the output file is still
    written in full before this is raised).
    """

    def __init__(self, message: str, summary=None):
        super().__init__(message)
        self.summary = summary


class ConfigError(LrwpError):
    """Invalid run configuration. Carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
