"""Exception hierarchy shared by all cmvar modules."""


class CmvarError(Exception):
    """Base class for every error raised by cmvar."""


class InputError(CmvarError, ValueError):
    """Malformed input: wrong shapes, bad JSON, invalid keys."""


class DomainError(CmvarError, ValueError):
    """A mathematical precondition is violated."""


class DegenerateConfiguration(DomainError):
    """All points coincide (or all squared distances vanish)."""


class IdentityViolation(CmvarError, ArithmeticError):
    """A determinant/rank identity failed beyond tolerance (numerical breakdown)."""


class NotRealizable(DomainError):
    """The Gram form has a negative eigenvalue beyond tolerance."""


class RankExceedsTarget(DomainError):
    """The Gram form needs more dimensions than requested."""


class UnsupportedFamily(DomainError):
    """The operation is not defined for this division-algebra family."""


class NonIntegerProduct(CmvarError, ArithmeticError):
    """A degree product evaluated to a non-integer; indicates a bug."""


class SelfAdjointnessViolation(DomainError):
    """A matrix expected to be self-adjoint is not."""


class OddRankAnomaly(DomainError):
    """Singular values of a supposedly skew-symmetric matrix do not pair up."""


class NotLaman(DomainError):
    """The graph of a linkage is not a Laman graph."""


class AllZeroSigma(DomainError):
    """Every prescribed squared length is zero."""


class SolverBudgetExceeded(CmvarError, RuntimeError):
    """Multi-start budget ran out while new realizations were still appearing.

    ``partial`` carries the (lower-bound-only) result gathered so far.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
