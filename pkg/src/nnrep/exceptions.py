class NNRepError(Exception):
    """Base class for all errors raised by nnrep."""


class ConfigError(NNRepError, ValueError):
    """Invalid sampler parameters (log base, threshold, radius, step)."""


class InputError(NNRepError, ValueError):
    """Malformed or inconsistent input data."""
