"""Exception types raised by the library."""


class TubalError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(TubalError, ValueError):
    """Operands have incompatible shapes."""


class SymmetryViolation(TubalError, ValueError):
    """A spectral tensor claimed to come from real data is not conjugate symmetric."""


class RankOutOfRange(TubalError, ValueError):
    """Requested rank is outside the valid range for the given dimensions."""


class FactorizationError(TubalError, RuntimeError):
    """An underlying per-slice factorization failed to converge."""


class NotOrthonormal(TubalError, ValueError):
    """A matrix expected to have orthonormal columns does not."""


class SingularOperator(TubalError, RuntimeError):
    """The explicitly sampled operator is rank deficient."""


class ZeroReference(TubalError, ValueError):
    """A normalized metric was asked to divide by a zero-norm reference."""
