"""Exception types shared across the package."""


class HourglassError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(HourglassError):
    """Operands have incompatible or invalid dimensions."""


class CapExceededError(HourglassError):
    """An enumeration would exceed the configured cardinality cap."""

    def __init__(self, cardinality: int, cap: int):
        super().__init__(
            f"enumeration of {cardinality} matrices exceeds the cap of {cap}"
        )
        self.cardinality = cardinality
        self.cap = cap


class ParseError(HourglassError):
    """A JSON document does not conform to the wire format."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message
