"""Exception types shared across the package."""


class BerryLabError(Exception):
    """Base class for every error raised by berrylab."""


class ConfigError(BerryLabError):
    """Invalid experiment configuration; ``path`` locates the offending key."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class NumericalError(BerryLabError):
    """A computation could not produce a trustworthy number."""


class NonFiniteIntegrand(NumericalError):
    pass


class ZeroOverlap(NumericalError):
    pass


class NormDrift(NumericalError):
    pass


class OriginOnPath(NumericalError):
    pass


class LowFidelityWarning(UserWarning):
    """Propagated state leaked noticeably out of the tracked eigenstate."""
