"""Exception hierarchy shared by the qnet modules.

Ordinary domain violations (division by zero, bad indices, zero states)
raise the builtin ``ZeroDivisionError`` / ``IndexError`` / ``ValueError``;
the classes here cover conditions that callers are expected to branch on.
"""


class QnetError(Exception):
    """Base class for qnet-specific errors."""


class ParseError(QnetError):
    """Malformed circuit text, state file, or scalar literal."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotRepresentableError(QnetError):
    """An exact amplitude was requested but does not exist in Q[sqrt(2)]."""


class EntangledError(QnetError):
    """A single-qubit substate was requested from an entangled state."""


class NotDeterministicError(QnetError):
    """The requested qubit still occurs with both values."""


class RandomStreamExhausted(QnetError):
    """Fewer random draws were supplied than the circuit's M gates need."""
