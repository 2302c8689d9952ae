"""Exception types shared across the package."""


class HotkitError(Exception):
    """Base class for all package errors."""


class UsageError(HotkitError, ValueError):
    """Invalid arguments: dimension mismatch, bad index, malformed input."""


class ParseError(UsageError):
    """Syntax error in a type term or expansion, with the offending offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        detail = f"{message} at position {position}"
        if text:
            detail += f"\n  {text}\n  {' ' * position}^"
        super().__init__(detail)


class NotBooleanError(UsageError):
    """An integer combination of p_T terms left the {0, 1} range."""


class UndecidedError(HotkitError):
    """Requested decision needs an enumeration beyond the configured guard."""


class InvariantError(HotkitError, RuntimeError):
    """A property that must hold by theory failed on computed data."""
