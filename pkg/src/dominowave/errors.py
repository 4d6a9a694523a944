"""Exception hierarchy.

Errors are grouped by what the caller can do about them: bad input values
(``ValueError`` subclasses), unreadable files (``DataFormatError``) and
requests the physics cannot satisfy (``PhysicalDomainError``).
"""


class DominoError(Exception):
    """Base class for every error raised by this package."""


class PhysicalDomainError(DominoError, ValueError):
    """The request is well formed but outside the model's physical domain."""


class DataFormatError(DominoError, ValueError):
    """Input bytes or text could not be parsed."""


# geometry
class InvalidGeometry(DominoError, ValueError):
    pass


class InvalidGap(DominoError, ValueError):
    pass


class OverlappingSpacing(PhysicalDomainError):
    pass


class NonPositiveHeight(DominoError, ValueError):
    pass


# wave model
class NonFalling(PhysicalDomainError):
    pass


class NonPropagating(PhysicalDomainError):
    pass


class Divergent(PhysicalDomainError):
    pass


class EmptyGrid(DominoError, ValueError):
    pass


class InsufficientData(DominoError, ValueError):
    pass


# acoustics
class MalformedContainer(DataFormatError):
    pass


class UnsupportedEncoding(DataFormatError):
    pass


class RateTooLow(DataFormatError):
    pass


class EmptyImpactList(DominoError, ValueError):
    pass


class TooShort(DominoError, ValueError):
    pass


class BandOutOfRange(DominoError, ValueError):
    pass


# validation
class UnknownDataset(DominoError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(DataFormatError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DuplicateSpacing(DataFormatError):
    pass


class EmptyOverlap(DominoError, ValueError):
    pass
