"""Exception hierarchy shared by the library and the CLI."""


class OkamotoError(Exception):
    """Base class. ``code`` is the stable identifier the CLI reports."""

    code = "error"


class DomainError(OkamotoError, ValueError):
    code = "domain_error"


class PreconditionError(OkamotoError, ValueError):
    code = "precondition_error"


class RegimeError(DomainError):
    code = "regime_error"


class ResourceError(OkamotoError):
    code = "resource_error"


class ParseError(OkamotoError, ValueError):
    code = "parse_error"

    def __init__(self, message, text=None, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.text = text
        self.position = position
