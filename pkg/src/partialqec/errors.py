"""Exception types shared across the package."""


class PartialQecError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidParams(PartialQecError):
    pass


class UnsolvableSymmetry(PartialQecError):
    pass


class LengthMismatch(PartialQecError):
    pass


class SizeMismatch(PartialQecError):
    pass


class UnsupportedFamily(PartialQecError):
    pass


class OddDefectCount(PartialQecError):
    pass


class InvalidChannel(PartialQecError):
    pass


class UnsupportedSector(PartialQecError):
    pass


class TooLarge(PartialQecError):
    pass


class OutOfRange(PartialQecError):
    pass


class InsufficientData(PartialQecError):
    pass


class DegenerateFit(PartialQecError):
    pass


class SingularPoint(PartialQecError):
    pass


class NoKeptSamples(PartialQecError):
    pass


class InvalidShape(PartialQecError):
    pass


class NoValidShape(PartialQecError):
    pass


class InvalidGrid(PartialQecError):
    pass


class UsageError(PartialQecError):
    pass
