"""Exception hierarchy shared by every subpackage.

The CLI maps DataFormatError to exit code 3 and NumericalError to 4.
"""


class EmiCleanError(Exception):
    """Base class for all library errors."""

    pass


class DataFormatError(EmiCleanError):
    """On-disk data is malformed or inconsistent."""

    pass


class BadMagicError(DataFormatError):
    """Container file does not start with the expected magic bytes."""

    pass


class DimensionOverflowError(DataFormatError):
    """Header dimensions describe a payload too large to address."""

    pass


class TruncatedPayloadError(DataFormatError):
    """File ends before the payload promised by its header."""

    pass


class UnsupportedDtypeError(DataFormatError):
    """Header carries an unknown dtype code."""

    pass


class ManifestMismatchError(DataFormatError):
    """Dataset manifest disagrees with the array files next to it."""

    pass


class NumericalError(EmiCleanError):
    """A numerical routine cannot produce a valid result."""

    pass


class NonFiniteError(NumericalError):
    """Input contains NaN or Inf."""

    pass


class NotPositiveDefiniteError(NumericalError):
    """Covariance is not positive definite even after the ridge."""

    pass


class ShapeMismatchError(EmiCleanError, ValueError):
    """Arrays that must share a shape do not."""

    pass
