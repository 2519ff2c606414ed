"""Exception types shared across the package."""


class SmallBallError(Exception):
    """Base class for every error raised by this package."""


class InvalidOrderError(SmallBallError, ValueError):
    pass


class CarrierMismatchError(SmallBallError, ValueError):
    pass


class UnsupportedCarrierError(SmallBallError, TypeError):
    pass


class DegenerateDilationError(SmallBallError, ValueError):
    pass


class BoundaryClippedError(SmallBallError, ValueError):
    pass


class RejectedInputError(SmallBallError, ValueError):
    """Inputs violate a hypothesis of the inequality being checked."""


class ResolutionError(SmallBallError, RuntimeError):
    def __init__(self, message, suggested_pitch=None):
        super().__init__(message)
        self.suggested_pitch = suggested_pitch


class SearchBudgetError(SmallBallError, RuntimeError):
    """Exact search ran out of nodes; carries the best bounds found so far."""

    def __init__(self, lower, upper, nodes):
        super().__init__(
            f"search budget of {nodes} nodes exhausted; bounds [{lower}, {upper}]"
        )
        self.lower = lower
        self.upper = upper
        self.nodes = nodes


class ConstructionParameterError(SmallBallError, ValueError):
    pass


class UnsupportedFunctionError(SmallBallError, ValueError):
    pass


class FormatError(SmallBallError, ValueError):
    pass


class UsageError(SmallBallError, ValueError):
    pass
