"""Exception hierarchy shared by all modules."""


class FHError(Exception):
    """Base class for every error raised by fhopuc."""


class EvaluationError(FHError):
    """A sampled function returned a non-finite value."""

    def __init__(self, message, theta=None):
        super().__init__(message)
        self.theta = theta


class DomainError(FHError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BranchError(DomainError):
    """A point lies on a branch cut of a multivalued function."""

    def __init__(self, message, cut_index=None):
        super().__init__(message)
        self.cut_index = cut_index


class RegionError(DomainError):
    """A point lies outside the region where an asymptotic formula applies."""


class ConvergenceError(FHError):
    """An iteration did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class BracketError(FHError):
    """No sign change on a bracketing interval."""


class SearchError(FHError):
    """A zero search found nothing in its region."""


class BoundaryError(FHError):
    """A zero lies on the boundary of a counting contour."""


class TruncationError(FHError):
    """A truncated expansion missed its tolerance."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class PrecisionError(FHError):
    """Working precision was insufficient; rerun at more bits."""


class SpecificationError(FHError, ValueError):
    """A weight or run configuration is malformed."""


class InsufficientDataError(FHError):
    """Too few data points for a statistic."""


class DegenerateError(FHError):
    """A formula collapsed to an identically zero expression."""
