"""Exception hierarchy shared by all ecodyn modules.

Two families matter to callers (and to the CLI exit-code mapping):
``ValidationError`` for rejected inputs and violated preconditions, and
``NumericalError`` for failures that arise while computing (poles,
blow-ups, non-convergence, spectrum proximity).
"""


class EcodynError(Exception):
    """Base class for all ecodyn errors."""


class ValidationError(EcodynError):
    """Rejected input or violated precondition.

    ``key`` optionally names the offending parameter for CLI messages.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class StructuralError(ValidationError):
    """Malformed expression tree or container."""


class UnsupportedError(ValidationError):
    """Input outside the supported regime (e.g. repeated roots)."""


class DegenerateDataError(ValidationError):
    """Data that makes the problem singular (e.g. singular Vandermonde)."""


class NumericalError(EcodynError):
    """Failure during numerical evaluation; maps to CLI exit code 3."""


class PoleError(NumericalError):
    """A requested grid crosses a pole of the solution."""

    def __init__(self, message: str, pole_location: float):
        super().__init__(message)
        self.pole_location = pole_location


class BlowUpError(NumericalError):
    """Integration produced a non-finite value.

    Carries the last node where the state was still finite.
    """

    def __init__(self, message: str, t_last: float, index_last: int, x_last):
        super().__init__(message)
        self.t_last = t_last
        self.index_last = index_last
        self.x_last = x_last


class NonConvergenceError(NumericalError):
    """Iterative scheme exceeded its iteration budget."""

    def __init__(self, message: str, log=None):
        super().__init__(message)
        self.log = log


class SingularMatrixError(NumericalError):
    """A direct linear solve met a numerically singular matrix."""


class SpectrumProximityError(NumericalError):
    """1/lambda too close to an eigenvalue of the discretized kernel."""

    def __init__(self, message: str, nearest_characteristic_number: complex):
        super().__init__(message)
        self.nearest_characteristic_number = nearest_characteristic_number


class ResolutionError(NumericalError):
    """Quadrature grid too coarse: internal refinement check failed."""


class CrossCheckError(NumericalError):
    """Closed-form result and its independent integration disagree."""
