"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GappedEntError(Exception):
    """Base class for every error raised by this package."""


class DimensionCap(GappedEntError):
    """Total Hilbert-space dimension exceeds the configured cap."""


class NonHermitian(GappedEntError, ValueError):
    pass


class ShapeMismatch(GappedEntError, ValueError):
    pass


class FactorIndexError(GappedEntError, IndexError):
    pass


class EmptyCut(GappedEntError, ValueError):
    pass


class IsometryViolation(GappedEntError):
    pass


class PeripheralSpectrum(GappedEntError):
    """Transfer operator has non-trivial peripheral spectrum (not a pure FCS)."""


class UnknownName(GappedEntError, KeyError):
    pass


class OutOfRegime(GappedEntError, ValueError):
    pass


class BasisNotOrthonormal(GappedEntError, ValueError):
    pass


class DegenerateGroundState(GappedEntError):
    pass


class InvalidRegion(GappedEntError, ValueError):
    pass


class EmptyProjector(GappedEntError):
    pass


class QuadratureUnconverged(GappedEntError):
    pass


class ConstraintViolated(GappedEntError, ValueError):
    pass


class ConfigInvalid(GappedEntError, ValueError):
    pass
