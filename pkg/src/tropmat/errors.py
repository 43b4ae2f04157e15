"""Exception types raised across the package."""


class TropmatError(Exception):
    """Base class for all package errors."""


class InputError(TropmatError, ValueError):
    """Malformed or out-of-range input (CLI maps these to exit code 2)."""


# matroids

class EmptyCollection(InputError):
    pass


class MixedCardinality(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class EmptySubset(InputError):
    pass


class RankOutOfRange(InputError):
    pass


class RankMismatch(InputError):
    pass


class MapMismatch(InputError):
    pass


class LoopyMatroid(InputError):
    pass


class ExchangeViolation(InputError):
    """A collection of equal-size sets fails the base exchange property."""

    def __init__(self, A, B, x):
        self.A, self.B, self.x = A, B, x
        super().__init__(
            f"exchange fails: A={sorted(A)}, B={sorted(B)}, x={x} has no partner in B-A"
        )


class PreconditionViolated(InputError):
    pass


class LemmaViolation(TropmatError, AssertionError):
    """An executable theorem check found a counterexample."""


# polytopes

class NotASubset(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class EmptyResult(InputError):
    pass


class NotAFace(InputError):
    pass


class NotCommonCell(InputError):
    pass


class NotABasePolytope(InputError):
    pass


# polytropes

class InvalidExpr(InputError):
    pass


class NotATree(InputError):
    pass


class KMismatch(InputError):
    pass


class EdgeNotInTree(InputError):
    pass


class Singular(InputError):
    pass


class NotBiconvex(InputError):
    pass


class NonGeneric(InputError):
    pass


class NonGenericTie(NonGeneric):
    pass


class NotAVertex(InputError):
    pass


class InconsistentSystem(TropmatError, RuntimeError):
    pass


# subdivisions

class EmptySpec(InputError):
    pass


class NotMaximal(InputError):
    pass


class PartitionTooSmall(InputError):
    pass


class NotVerified(TropmatError):
    pass


class WrongKind(InputError):
    pass


class InvalidI(InputError):
    pass
