"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, SolverError -> 3,
NoConvergenceError -> 4.
"""


class TcdynError(Exception):
    """Base class for package errors."""


class ConfigError(TcdynError):
    """Invalid configuration file or parameter set."""


class SolverError(TcdynError):
    """An elliptic solve or time step failed outright."""


class NoConvergenceError(TcdynError):
    """An iteration ran out of budget before meeting its tolerance."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history if history is not None else []
