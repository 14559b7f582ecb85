"""Exception types shared across the package."""

__all__ = [
    "ConfigurationError",
    "PairingError",
    "TableRangeError",
    "QuadratureError",
    "MonteCarloError",
]


class ConfigurationError(ValueError):
    """Invalid configuration: bad constants, unknown names, wrong variant."""


class PairingError(ConfigurationError):
    """Wavelet regularity too low for the noise ill-posedness (r < nu + 2)."""


class TableRangeError(RuntimeError):
    """A lookup fell outside a tabulated grid; rebuild the table wider."""


class QuadratureError(RuntimeError):
    """A quadrature accuracy check failed during table construction."""


class MonteCarloError(RuntimeError):
    """Too many replications failed for the run to be trustworthy."""
