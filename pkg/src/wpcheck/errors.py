"""Exception hierarchy shared by every module."""


class WPCheckError(Exception):
    """Base class for all library errors."""


class InvalidProfile(WPCheckError, ValueError):
    pass


class InvalidPermutation(WPCheckError, ValueError):
    pass


class InvalidWeights(WPCheckError, ValueError):
    pass


class InvalidDistribution(WPCheckError, ValueError):
    pass


class TooLarge(WPCheckError):
    """An enumeration guard was exceeded."""


class DegenerateFunction(WPCheckError):
    """The requested label pair has an empty preimage."""


class NotNeutral(WPCheckError):
    """Raised by neutral-mode decisions; carries the violating (sigma, x)."""

    def __init__(self, sigma, profile):
        self.sigma = tuple(sigma)
        self.profile = tuple(profile)
        super().__init__(
            f"function is not neutral: sigma={list(self.sigma)} x={list(self.profile)}"
        )


class NotAWeightedPlurality(WPCheckError):
    """The supplied weights do not realize the function."""


class SolverInconsistency(WPCheckError):
    """An internal certificate check failed. This is a bug, never user error."""
