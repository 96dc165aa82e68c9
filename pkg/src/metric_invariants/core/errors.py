class JetError(ValueError):
    """Base class for every domain error raised by metric_invariants."""


class DirectionOutOfRangeError(JetError):
    pass


class LengthMismatchError(JetError):
    pass


class NotDominatedError(JetError):
    pass


class DimensionMismatchError(JetError):
    pass


class OrderMismatchError(JetError):
    pass


class NonSquareMatrixError(JetError):
    pass


class SingularMetricError(JetError):
    pass


class PrimeDividesDenominatorError(JetError):
    """A denominator vanishes modulo the chosen prime; draw another prime."""

    def __init__(self, prime: int):
        super().__init__(f"prime {prime} divides an entry denominator")
        self.prime = prime


class NotNormalFormError(JetError):
    pass


class CurvatureSymmetryError(JetError):
    pass


class InconsistentSystemError(JetError):
    pass


class InvalidPointFileError(JetError):
    pass
