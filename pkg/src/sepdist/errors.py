"""Exception hierarchy shared by all sepdist modules."""


class SepDistError(ValueError):
    """Base class for every error raised by this package."""


class AsymmetricMatrix(SepDistError):
    pass


class DimensionMismatch(SepDistError):
    pass


class NotPositiveDefinite(SepDistError):
    pass


class PairingFailure(SepDistError):
    """Spectrum of J @ gamma could not be split into +-i*mu pairs."""


class IndexOutOfRange(SepDistError, IndexError):
    pass


class UnphysicalSpec(SepDistError):
    pass


class UnphysicalMatrix(SepDistError):
    pass


class LossOutOfRange(SepDistError):
    pass


class TransmittanceOutOfRange(SepDistError):
    pass


class ZeroEfficiency(SepDistError):
    pass


class NoCrossing(SepDistError):
    pass


class DegenerateSpectrum(SepDistError):
    pass


class MissingSetting(SepDistError):
    pass


class InsufficientSamples(SepDistError):
    pass
