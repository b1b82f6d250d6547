"""Exception hierarchy shared by all modules.

Every domain failure raises a subclass of :class:`ConfocalForgeError`, so
callers (notably the CLI) can distinguish domain errors from genuine bugs
or I/O failures with a single except clause.
"""


class ConfocalForgeError(Exception):
    """Base class for all domain errors raised by this package."""


class EmptyPopulationError(ConfocalForgeError):
    """Statistics requested over an empty set of values."""


class InvalidSigmaError(ConfocalForgeError):
    """Gaussian sigma is negative or not finite."""


class KernelTooLargeError(ConfocalForgeError):
    """Convolution kernel radius reaches or exceeds the stack extent."""


class BinMismatchError(ConfocalForgeError):
    """Bin factor does not divide the corresponding stack dimension."""


class DegenerateNoiseError(ConfocalForgeError):
    """Noise moments cannot be realized by any supported model."""


class NegativeSkewError(ConfocalForgeError):
    """Negative third central moment; the gamma family cannot match it."""


class DegenerateHistogramError(ConfocalForgeError):
    """All values identical; no threshold can split the histogram."""


class SegmentationError(ConfocalForgeError):
    """Segmentation produced no usable signal/noise partition."""


class ScaleUndefinedError(ConfocalForgeError):
    """Signal mean of the noiseless stack is zero; no scale exists."""


class InvalidTargetError(ConfocalForgeError):
    """Target signal mean does not exceed the noise floor."""


class NoSignalError(ConfocalForgeError):
    """Ground truth contains no positive voxel."""


class OutOfBoundsError(ConfocalForgeError):
    """Generated geometry does not fit inside the requested volume."""


class UnsupportedFormatError(ConfocalForgeError):
    """File content is not a format this package reads or writes."""


class CorruptStackError(ConfocalForgeError):
    """Stack file is structurally inconsistent (e.g. mixed page shapes)."""
