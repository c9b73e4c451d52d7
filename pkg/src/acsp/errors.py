"""Error taxonomy shared by all modules.

InputError covers everything a caller can cause (malformed files, violated
preconditions, limits); the CLI maps it to exit code 2 with a structured
diagnostic.  InternalCheckError marks a failed internal soundness check
(a bug, never bad input) and maps to exit code 1.
"""

from __future__ import annotations


class InputError(Exception):
    """Rejected input; carries optional structured details for diagnostics."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class NotAcyclicError(InputError):
    """An operation required an acyclic instance; carries the GYO trace."""

    def __init__(self, message: str, trace=None, **details):
        super().__init__(message, **details)
        self.trace = trace or []


class InternalCheckError(Exception):
    """A verified-by-construction property failed; indicates a bug."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details
