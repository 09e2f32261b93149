"""Exception hierarchy shared by all modules."""


class UnwindingError(Exception):
    """Base class for every error raised by the package."""


class DomainError(UnwindingError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class TruncationError(UnwindingError):
    """The discretization cannot hold a result without aliasing.

    ``tail_mass`` carries an estimate of the H^2 mass that would be lost.
    """

    def __init__(self, message, tail_mass=float("nan")):
        super().__init__(message)
        self.tail_mass = tail_mass


class ContractionError(UnwindingError):
    """A multiplier is not in the closed unit ball of its multiplier algebra."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class StrategyExhausted(UnwindingError):
    """A multiplier sequence ran out and no tail rule was declared."""


class DegenerateRemainder(UnwindingError):
    """Greedy selection found no grid point carrying energy."""


class DeflationError(UnwindingError):
    """Blaschke deflation left roots inside the disc."""


class RearrangementError(UnwindingError):
    """Scalar-coefficient rearrangement requested for a non-polynomial input."""

