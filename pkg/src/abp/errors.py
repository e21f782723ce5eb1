"""Exception hierarchy.

Two families matter for the CLI exit codes: ``ValidationError`` (bad or
inadmissible input, exit code 2) and ``NumericsError`` (an iteration or
refinement failed to converge within its budget, exit code 3).
"""


class AbpError(Exception):
    """Base class for all library errors."""


class ValidationError(AbpError, ValueError):
    """Input violates a precondition or invariant."""


class NumericsError(AbpError, ArithmeticError):
    """A numerical procedure exhausted its budget without converging."""


class OutOfDomain(ValidationError):
    """A point lies outside the domain an operation requires."""


class ZeroOnContour(ValidationError):
    """|f| fell below tolerance at a contour sample."""


class NoConvergence(NumericsError):
    """Iteration budget exhausted."""


class BadBracket(ValidationError):
    """Root bracket does not straddle the target value."""


class DegenerateInput(ValidationError):
    """Leading coefficient (or similar pivot) is numerically zero."""


class PoleProximity(ValidationError):
    """Evaluation point is too close to a Blaschke factor pole."""


class ClassViolation(ValidationError):
    """Requested centering class is not satisfied by the zeros."""

    def __init__(self, message, measured=None):
        super().__init__(message)
        self.measured = measured


class ExistenceViolation(ValidationError):
    """Zero set violates the product-modulus existence condition."""


class Unfixable(ValidationError):
    """Radial correction would push a zero out of the annulus."""


class TruncationOverflow(NumericsError):
    """Required truncation depth exceeds the hard cap."""


class IncompleteFiber(NumericsError):
    """Fewer preimages certified than the mapping degree."""


class Stuck(NumericsError):
    """An adjustment step would leave the domain."""


class ParityViolation(ValidationError):
    """Scheme type is incompatible with the parity of n."""


class EmptyRange(ValidationError):
    """Requested enumeration range is empty by the degree bound."""


class NotHyperbolicEvidence(ValidationError):
    """A critical orbit could not be certified as escaping."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class NotCantorCircle(ValidationError):
    """Detected dynamics are inconsistent with a Cantor circle Julia set."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail
