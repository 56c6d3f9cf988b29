"""Exception hierarchy shared by every geodef module."""


class GeodefError(Exception):
    """Base class for all geodef errors."""


class NotPrime(GeodefError, ValueError):
    pass


class ReducibleModulus(GeodefError, ValueError):
    pass


class ZeroDenominator(GeodefError, ZeroDivisionError):
    pass


class FormulaSyntaxError(GeodefError, SyntaxError):
    """Concrete-syntax error; ``pos`` is the 0-based character offset."""

    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos}")
        self.msg = message
        self.text = text
        self.pos = pos
        self.offset = pos + 1


class UnknownSymbol(GeodefError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown symbol"


class UnboundVariable(GeodefError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unbound variable"


class UnboundSymbol(UnknownSymbol):
    pass


class OrderUnsupported(GeodefError, TypeError):
    pass


class NotEnumerable(GeodefError, TypeError):
    pass


class DimensionTooSmall(GeodefError, ValueError):
    pass


class LengthMismatch(GeodefError, ValueError):
    pass


class CapacityExceeded(GeodefError, RuntimeError):
    pass


class EmptyDelta(GeodefError, ValueError):
    pass


class SingularLinearPart(GeodefError, ValueError):
    pass


class DependentFrame(GeodefError, ValueError):
    pass


class UniverseMismatch(GeodefError, ValueError):
    pass


class NotAnAutomorphism(GeodefError, ValueError):
    pass


class NoDecomposition(GeodefError, ValueError):
    pass


class FieldMismatch(GeodefError, ValueError):
    pass


class TwoElementField(GeodefError, ValueError):
    pass
