"""Exception types raised across the package."""


class NoiselabError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NoiselabError, ValueError):
    """An argument or configuration value lies outside its supported domain."""


class PreconditionError(NoiselabError, ValueError):
    """An operation was called with inputs violating its precondition."""


class QuadratureError(NoiselabError, RuntimeError):
    """Grid quadrature did not converge within the allowed refinements."""


class DivergenceError(NoiselabError, ValueError):
    """A weight sequence is not (certifiably) square summable."""


class ResourceError(NoiselabError, RuntimeError):
    """A requested computation exceeds the configured resource budget."""
