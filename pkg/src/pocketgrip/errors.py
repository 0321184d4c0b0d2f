"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a model function."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class EmptyWindow(ValueError):
    """No trace sample falls inside the requested analysis window."""


class DegenerateNormal(ValueError):
    """The normal force vanishes inside an analysis window."""


class ConfigError(ValueError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(ConfigError):
    def __init__(self, field, message, lineno=None):
        self.field = field
        self.lineno = lineno
        text = f"{field}: {message}"
        if lineno is not None:
            text = f"line {lineno}: {text}"
        super().__init__(text)


class UnknownKey(ConfigError):
    def __init__(self, section, key, lineno=None):
        self.section = section
        self.key = key
        self.lineno = lineno
        text = f"unknown key {key!r} in section [{section}]"
        if lineno is not None:
            text = f"line {lineno}: {text}"
        super().__init__(text)
