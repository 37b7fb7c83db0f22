"""Exception hierarchy for the census engine.

Every rejection raised by the engine is a ``CensusError`` so the CLI can map
it to exit code 1 without catching unrelated failures.
"""


class CensusError(ValueError):
    """Base class for all engine rejections."""


class LatticeMismatch(CensusError):
    pass


class InvalidClass(CensusError):
    pass


class MissingEmbedding(CensusError):
    pass


class ParityError(CensusError):
    pass


class UnsupportedInput(CensusError):
    pass


class EmptyLinearSystem(CensusError):
    pass


class SeriesError(CensusError):
    pass


class BoundMismatch(CensusError):
    pass


class FixtureError(CensusError):
    pass


class PreconditionFailed(CensusError):
    """Raised when an exact-sequence shortcut is used outside its regime.

    ``values`` holds the cohomology numbers that broke the precondition so the
    caller can see which vanishing failed.
    """

    def __init__(self, message: str, values: dict | None = None):
        super().__init__(message)
        self.values = dict(values or {})


class ConsistencyError(CensusError):
    """Two independent computations of the same quantity disagree."""
