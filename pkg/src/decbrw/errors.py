"""Exception types raised by the hashing library."""


class DecBrwError(Exception):
    """Base class for library errors."""


class OverlongInput(DecBrwError, ValueError):
    """Byte input too long for the limb payload of the chosen prime."""


class BoundViolation(DecBrwError, AssertionError):
    """An operand's bound class does not permit the requested operation."""


class AccumulationOverflow(DecBrwError, OverflowError):
    """A limb-wise sum would not fit in a 64-bit word."""


class MixedBounds(DecBrwError, ValueError):
    """Elements packed into lanes carry different bound classes."""


class LeafTooLong(DecBrwError, ValueError):
    """A BRW leaf was asked to absorb 2^t or more blocks."""


class SchemeMismatch(DecBrwError, ValueError):
    """A block stream was padded with the wrong scheme for this hash."""


class InvalidC(DecBrwError, ValueError):
    """Decimation factor outside the supported range."""


class ParamsTooLarge(DecBrwError, ValueError):
    """Toy parameters whose key space is too large to enumerate."""
