"""Exception hierarchy shared by all modules."""


class MinRankError(Exception):
    """Base class for every error raised by this package."""


# field
class FieldError(MinRankError):
    pass


class NotPrime(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class TooLarge(MinRankError):
    pass


class ZeroInverse(FieldError, ZeroDivisionError):
    pass


# linalg
class LinalgError(MinRankError):
    pass


class Singular(LinalgError):
    pass


class SingularTrailingBlock(Singular):
    pass


class ZeroScale(LinalgError):
    pass


class NotSymmetric(LinalgError):
    pass


class DimensionMismatch(LinalgError):
    pass


# graph
class GraphFormatError(MinRankError):
    pass


class BadHeader(GraphFormatError):
    pass


class VertexOutOfRange(GraphFormatError):
    pass


class DuplicateEdge(GraphFormatError):
    pass


class SelfLoop(GraphFormatError):
    pass


class BadGraph6(GraphFormatError):
    pass


class NotAClique(MinRankError):
    pass


class TooLargeToEnumerate(TooLarge):
    pass


# solvers
class SearchSpaceTooLarge(TooLarge):
    pass


# census
class OddDimension(MinRankError):
    pass


class NonIntegralDivision(MinRankError):
    pass


# constructions
class ConstructionError(MinRankError):
    pass


class PrimeField(ConstructionError):
    pass


class NoClique(ConstructionError):
    pass


class VerificationFailed(ConstructionError):
    pass


class FieldTooSmall(ConstructionError):
    pass


class NoFeasibleScalar(ConstructionError):
    pass


class RetriesExhausted(ConstructionError):
    pass


class TooSmall(ConstructionError):
    pass
