"""Exception hierarchy shared by every module."""


class PeriodicMixingError(Exception):
    """Base class for all package errors."""


class DimensionError(PeriodicMixingError, ValueError):
    pass


class PreconditionError(PeriodicMixingError, ValueError):
    pass


class BudgetError(PeriodicMixingError, RuntimeError):
    pass


class UnsupportedSpec(PeriodicMixingError, ValueError):
    pass


class NotLossless(PeriodicMixingError):
    """Raised when the measurements cannot determine the signal.

    ``uncovered`` lists the unknowns that no equation resolves; its element
    format depends on the raising operation (``(channel, phase)`` pairs for
    periodic signals, ``(row, phase)`` for image streams, channel indices for
    permutation exosystems).
    """

    def __init__(self, message, uncovered=()):
        super().__init__(message)
        self.uncovered = list(uncovered)


class InsufficientHorizon(PeriodicMixingError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class InconsistentStream(PeriodicMixingError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InconsistentSamples(InconsistentStream):
    pass


class InsufficientExcitation(PeriodicMixingError):
    def __init__(self, message, min_singular_value=None):
        super().__init__(message)
        self.min_singular_value = min_singular_value


class PartialReconstruction(PeriodicMixingError):
    """Some sensors of a round-robin network could not be recovered.

    ``recovered`` maps sensor index (1-based) to its recovered initial state,
    ``failed`` lists the sensors whose rows never reached full rank.
    """

    def __init__(self, message, recovered, failed):
        super().__init__(message)
        self.recovered = dict(recovered)
        self.failed = list(failed)
