"""Exception hierarchy shared by every module of the package."""


class TaylorShiftError(Exception):
    """Base class for all package errors."""


class DomainError(TaylorShiftError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ZeroPole(TaylorShiftError, ZeroDivisionError):
    """Evaluation of a Laurent polynomial with negative exponents at z = 0."""


class EmptySampleSet(TaylorShiftError, ValueError):
    pass


class VerificationError(TaylorShiftError, AssertionError):
    """An identity that must hold exactly was found to fail."""


class GeometryInvalid(TaylorShiftError, ValueError):
    """A domain, compact set or contour violates its construction invariants."""


class OnContour(GeometryInvalid):
    pass


class InsufficientSamples(GeometryInvalid):
    pass


class DegenerateSet(GeometryInvalid):
    """The compact set has zero capacity (a single point)."""


class DuplicateNodes(TaylorShiftError, ValueError):
    pass


class PoleAtNode(TaylorShiftError, ValueError):
    pass


class QuadratureUnstable(TaylorShiftError, ArithmeticError):
    pass


class SequenceTooSmall(TaylorShiftError, ValueError):
    """An index sequence value is below the degree of the target polynomial."""


class BaseExhausted(TaylorShiftError, ValueError):
    """A subsequence construction ran past the end of its base index list."""


class NotReached(TaylorShiftError):
    """The n0 search hit ``n_max`` without all errors dropping below epsilon.

    ``report`` holds the full decay table that was computed on the way.
    """

    def __init__(self, n_max, best_errors, report=None):
        self.n_max = n_max
        self.best_errors = best_errors
        self.report = report
        super().__init__(f"no n <= {n_max} reached the tolerance; best errors {best_errors}")


class ConfigError(TaylorShiftError, ValueError):
    pass
