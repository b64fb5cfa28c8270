"""Shared exception taxonomy.

Exit-code mapping used by the CLI: ConfigurationError -> 2,
DivergenceError -> 3, tolerance failures in check subcommands -> 4.
"""


class MkdvLabError(Exception):
    """Base class for all package errors."""


class ConfigurationError(MkdvLabError):
    """Invalid grid/parameter/config input."""


class SymmetryError(MkdvLabError):
    """A real (Hermitian-symmetric) field was required but not supplied."""


class ParameterError(MkdvLabError):
    """A numeric parameter is outside its admissible range."""


class ResolutionError(MkdvLabError):
    """Temporal or spectral sampling too coarse for the requested operation."""


class DivergenceError(MkdvLabError):
    """Blow-up detected during time integration.

    Carries the last good state and time so a caller can inspect the
    trajectory up to the failure.
    """

    def __init__(self, message, t_last=None, state_last=None):
        super().__init__(message)
        self.t_last = t_last
        self.state_last = state_last


class ConditioningError(MkdvLabError):
    """Divided-difference (or similar) extraction is too ill-conditioned."""
