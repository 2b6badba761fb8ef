"""Exception types shared across the package."""


class HomlieError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(HomlieError):
    """Malformed or inconsistent input data (shapes, duplicate names,
    contradictory structure constants, invalid commutation factor)."""


class FormatError(HomlieError):
    """A document could not be parsed.  Carries a ``path`` describing the
    offending field, e.g. ``brackets[3].value``."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class UnsupportedOperationError(HomlieError):
    """The requested computation is outside the supported regime
    (e.g. a nonlinear split solve for non-abelian coefficients)."""


class FlatnessError(HomlieError):
    """The requested module action does not square to zero; carries a
    ``witness`` cochain with a nonzero second differential."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalConsistencyError(HomlieError):
    """A defensive assertion failed: an object that passed its validation
    produced an invalid result downstream.  Always a bug, never user error."""
