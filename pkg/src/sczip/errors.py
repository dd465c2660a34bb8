"""Exception types shared across the sczip pipeline."""


class SczipError(Exception):
    """Base class for all sczip errors."""


class InvalidInput(SczipError):
    """An argument is outside its documented domain (non-finite, bad kind, ...)."""


class NonDivisible(SczipError):
    """Requested row count does not divide the tensor's element count."""


class CorruptStream(SczipError):
    """A serialized stream fails a structural or integrity check."""


class InvalidContainer(SczipError):
    """Container header is malformed or internally inconsistent."""


class UnsupportedVersion(SczipError):
    """Container declares a format version this build cannot decode."""


class AlphabetOverflow(SczipError):
    """A symbol exceeds the declared alphabet size."""


class NormalizeError(SczipError):
    """Frequency normalization received an all-zero count vector."""


class PrecisionTooSmall(SczipError):
    """More distinct symbols than slots at the requested precision."""


class UncodableSymbol(SczipError):
    """Encoder met a symbol whose normalized frequency is zero."""


class NoFeasibleReshape(SczipError):
    """No candidate row count satisfies the reshape constraints."""
