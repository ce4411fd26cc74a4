"""Exception types shared across the package."""


class HalfIntError(ValueError):
    """Base class for all domain errors raised by this package."""


class ZeroInput(HalfIntError):
    pass


class EvenInput(HalfIntError):
    pass


class PlaceMismatch(HalfIntError):
    pass


class CharacterMismatch(HalfIntError):
    pass


class NotInK0(HalfIntError):
    pass


class OutsideDomain(HalfIntError):
    pass


class UnsupportedCoset(HalfIntError):
    pass


class PrecisionExhausted(HalfIntError):
    pass


class ImageEscapesSpan(HalfIntError):
    pass


class AllLiftsVanish(HalfIntError):
    pass


class UndecidedBlock(HalfIntError):
    pass


class RamanujanViolation(HalfIntError):
    pass


class ParseError(HalfIntError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DuplicateIndex(ParseError):
    pass


class PrecisionHeaderMismatch(ParseError):
    pass


class InvariantViolation(HalfIntError):
    pass
