"""Exception hierarchy shared by every rsmsr module."""


class RSMSRError(Exception):
    """Base class for all errors raised by rsmsr."""


class InvalidArguments(RSMSRError, ValueError):
    pass


class NotPrime(InvalidArguments):
    pass


class PrimeTooSmall(InvalidArguments):
    pass


class DuplicatePrime(InvalidArguments):
    pass


class NoIrreducibleFound(RSMSRError):
    pass


class ConfigMismatch(RSMSRError, ValueError):
    """Operands belong to different field towers."""


class DivisionByZero(RSMSRError, ZeroDivisionError):
    pass


class NotABasis(RSMSRError, ValueError):
    pass


class ShapeMismatch(RSMSRError, ValueError):
    pass


class NonConsecutiveAlphaExponents(RSMSRError):
    """A column handed to the interference operator is malformed."""


class IndexOutOfRange(RSMSRError, IndexError):
    pass


class UnexpectedDependence(RSMSRError):
    """Subspace generators turned out linearly dependent."""


class SpanDeficient(RSMSRError):
    def __init__(self, dim_k, expected):
        super().__init__(f"span has dimension {dim_k}, expected {expected}")
        self.dim_k = dim_k
        self.expected = expected


class LengthMismatch(RSMSRError, ValueError):
    pass


class BadHelperSet(RSMSRError, ValueError):
    pass


class BadT(RSMSRError, ValueError):
    pass


class SubspaceRankFailure(RSMSRError):
    pass


class NotAHelper(RSMSRError, ValueError):
    pass


class MissingResponse(RSMSRError, KeyError):
    pass


class TraceNotInSubfield(RSMSRError):
    pass
