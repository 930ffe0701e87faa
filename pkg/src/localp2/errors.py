"""Exception hierarchy shared across the package.

``exit_code`` mirrors the CLI contract: 1 identity/corpus failure,
2 input error, 3 internal postcondition violation.
"""

from __future__ import annotations


class LocalP2Error(Exception):
    exit_code = 1


class InputError(LocalP2Error):
    """Bad user input: malformed files, out-of-range constructor arguments."""

    exit_code = 2


class ShapeError(InputError):
    """A matrix shape does not match the dimension vector."""


class HeartMismatchError(InputError):
    """Two representations living in different hearts were combined."""


class HeartRangeError(InputError):
    """Constructor asked for a window slot outside its valid heart range."""


class MembershipError(InputError):
    """A twist was requested where window membership fails."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


class MissingVariableError(InputError):
    """A character was evaluated without a value for some dimension variable."""


class ScalarModeError(InputError):
    """Invalid scalar-mode configuration (e.g. prime too small)."""


class InternalCheckError(LocalP2Error):
    """A construction postcondition failed; indicates a bug, not bad input."""

    exit_code = 3
