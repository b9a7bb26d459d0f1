"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(RuntimeError):
    """A configured size budget would be exceeded.

    The message names the cap and the option that raises it.
    """


class PsiParseError(ValueError):
    """A psi document could not be parsed."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
