"""Exception hierarchy shared by all semicirc modules."""


class SemicircError(Exception):
    """Base class for every error raised by this package."""


class EmptyProductError(SemicircError):
    """A semigroup product over an empty sequence was requested."""


class CircuitError(SemicircError):
    """Malformed circuit or a circuit that violates an operation's contract."""


class InvalidOperandError(CircuitError):
    pass


class NotRegularError(CircuitError):
    pass


class ShapeMismatchError(CircuitError):
    pass


class RangeError(SemicircError):
    """Bad range query or a scheme asked for something it cannot answer."""


class EmptySchemeError(RangeError):
    pass


class ShortRangeError(RangeError):
    pass


class SynthesisError(SemicircError):
    pass


class PreconditionError(SynthesisError):
    pass


class EmptyRowError(SynthesisError):
    pass


class GreedyInvariantError(SynthesisError):
    pass


class FormatError(SemicircError):
    """Parse failure in one of the v1 text formats."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
