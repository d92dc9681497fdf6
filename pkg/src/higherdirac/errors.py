"""Exception hierarchy shared by every module."""


class HigherDiracError(ValueError):
    """Invalid input: some stated invariant or precondition does not hold."""


class AmbientMismatch(HigherDiracError):
    """Operands live in different ambient spaces."""


class DegreeMismatch(HigherDiracError):
    """A form or multivector has the wrong degree for the operation."""


class InvariantViolation(HigherDiracError):
    """A data invariant (isotropy, E-skewness, complement, ...) fails.

    ``invariant`` names the violated condition.
    """

    def __init__(self, invariant: str, message: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)


class RankDrop(HigherDiracError):
    """A frame loses rank at a sample point."""

    def __init__(self, point, rank, expected):
        self.point = point
        self.rank = rank
        self.expected = expected
        pt = ", ".join(str(c) for c in point)
        super().__init__(f"frame rank drops to {rank} (expected {expected}) at ({pt})")
