"""Exception hierarchy shared across the package."""


class QcspError(Exception):
    """Base class for all package errors."""


class SignatureMismatchError(QcspError):
    """Two structures (or a structure and a sentence) disagree on the signature."""


class ResourceLimitError(QcspError):
    """A configured size cap would be exceeded; the computation was refused."""


class FormatError(QcspError):
    """A structure file is malformed."""


class SentenceError(QcspError):
    """A sentence is outside the fragment an operation requires."""


class ParseError(QcspError):
    """Syntax error in the sentence language, with a source position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
