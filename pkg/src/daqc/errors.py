"""Shared exception types."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class ResourceLimitError(RuntimeError):
    """Requested problem size exceeds the dense-simulation limits."""


class ConfigError(ValueError):
    """A run configuration file is malformed or inconsistent."""
