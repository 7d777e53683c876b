"""Exception and warning types shared across the package."""


class NanoRabiError(Exception):
    """Base class for all errors raised by nanorabi."""


class ConfigError(NanoRabiError, ValueError):
    """Invalid run configuration or parameter value."""


class DegenerateParametersError(NanoRabiError, ValueError):
    """Parameters sit on a singular point of a closed-form expression."""


class SingularSteadyStateError(NanoRabiError, RuntimeError):
    """The Liouvillian kernel is not one-dimensional."""


class DiagnosticWarning(UserWarning):
    """A numerical diagnostic failed (trace drift, undecayed correlation)."""
