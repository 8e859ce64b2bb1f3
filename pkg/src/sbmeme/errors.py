"""Exception hierarchy shared by the analysis modules."""


class SBMemeError(Exception):
    """Base class for all package errors."""


class InvalidValue(SBMemeError, ValueError):
    """A data object was constructed with values violating its invariants."""


class CorpusFormatError(SBMemeError, ValueError):
    """An input corpus file does not follow the expected schema."""


class UnfittableMeme(SBMemeError):
    """Parameter estimation failed for one meme.

    ``reason`` is a short machine-readable tag written to reports.
    """

    reason = "unfittable"


class NoInnovationSignal(UnfittableMeme):
    reason = "no-innovation-signal"


class NoImitationSolution(UnfittableMeme):
    reason = "no-imitation-solution"


class EmptyWakeWindow(UnfittableMeme):
    reason = "empty-wake-window"


class InsufficientSample(SBMemeError):
    """Too few observations for a corpus-level estimator."""


class ZeroVariance(SBMemeError):
    """All sample values are identical."""


class DegenerateSeries(SBMemeError):
    """A series has zero variance where a correlation is requested."""


class FitFailed(SBMemeError):
    """An iterative curve fit did not converge."""
