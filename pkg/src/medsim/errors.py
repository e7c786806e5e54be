"""Error types shared across the package."""


class ConfigurationError(ValueError):
    """A topology, route plan, or run configuration is invalid."""


class ParameterError(ValueError):
    """A numeric parameter is outside its valid range."""


class OpCapExceededError(RuntimeError):
    """A single trial attempted more operations than the configured cap."""
