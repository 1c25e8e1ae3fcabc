"""Exception hierarchy shared across webrot modules."""


class WebrotError(Exception):
    """Base class for all webrot errors."""


class MalformedUri(WebrotError):
    pass


class UnsupportedScheme(WebrotError):
    pass


class EmptyInput(WebrotError):
    pass


class LengthMismatch(WebrotError):
    pass


class DegenerateInput(WebrotError):
    pass


class NegativeAge(WebrotError):
    pass


class MismatchedOriginal(WebrotError):
    pass


class TimeMapParseError(WebrotError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ProviderUnavailable(WebrotError):
    pass


class EmptySignature(WebrotError):
    pass


class UnknownModel(WebrotError):
    pass


class FetchError(WebrotError):
    pass


class OfflineViolation(WebrotError):
    """Raised when a live network fetch is attempted in --offline mode."""


class CacheLocked(WebrotError):
    pass


class ConfigError(WebrotError):
    pass
