"""Exception hierarchy shared by every cipls module."""


class CiplsError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class InvalidConfig(CiplsError, ValueError):
    pass


class DimensionMismatch(CiplsError, ValueError):
    pass


class NonFiniteInput(CiplsError, ValueError):
    pass


class EmptyModel(CiplsError, RuntimeError):
    """Raised when a model that has seen no samples is asked to project."""


class DegenerateTarget(CiplsError, ValueError):
    """The residual target carries no covariance with the residual features."""


class DegenerateModel(CiplsError, ValueError):
    pass


class InvalidFraction(CiplsError, ValueError):
    pass


class TooFewSamples(CiplsError, ValueError):
    pass


class NotEnoughComponents(CiplsError, ValueError):
    pass


class InvalidSpec(CiplsError, ValueError):
    pass


class LabelError(CiplsError, ValueError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class ParseError(CiplsError, ValueError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class RaggedRows(ParseError):
    pass


class FormatError(CiplsError, ValueError):
    """Malformed model or report document; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class VersionError(FormatError):
    pass
