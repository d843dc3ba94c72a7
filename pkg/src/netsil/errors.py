"""Exception types shared across the package."""


class NetsilError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NetsilError, ValueError):
    """Invalid parameter, option, or config file content."""


class DimensionMismatchError(NetsilError, ValueError):
    """Inputs whose shapes or lengths do not line up."""


class DegenerateInputError(NetsilError, ValueError):
    """Input that is structurally valid but has no usable signal (e.g. zero range)."""


class EigensolverError(NetsilError, RuntimeError):
    """Dense symmetric eigendecomposition failed to converge."""


class AggregationError(NetsilError, RuntimeError):
    """No usable replicate results to aggregate."""
