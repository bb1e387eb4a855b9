"""Exception hierarchy shared by all modules."""


class HoweMooreError(Exception):
    """Base class for library errors."""


class ConfigurationError(HoweMooreError, ValueError):
    """Unsupported group type, rank or form."""


class ResourceError(HoweMooreError, RuntimeError):
    """A desk-scale size guard was exceeded."""


class PrecisionError(HoweMooreError, ArithmeticError):
    """A numerical decision could not be made reliably at the given tolerance."""


class RangeError(HoweMooreError, OverflowError):
    """An exponential left double-precision range."""

    def __init__(self, magnitude):
        self.magnitude = magnitude
        super().__init__(f"exponent real part {magnitude:.6g} exceeds the double-precision guard (700)")


class ZeroDenominatorError(PrecisionError):
    """A normalizing value vanished (or is not safely positive)."""

    def __init__(self, message, atom_index=None):
        self.atom_index = atom_index
        super().__init__(message)


class BoundaryError(HoweMooreError, ValueError):
    """A parameter sits on the boundary of a region where a choice would be ambiguous."""
