"""Exception types shared across the package."""


class FraxError(Exception):
    """Base class for all frax-specific errors."""


class ParameterDomainError(FraxError, ValueError):
    """A parameter lies outside the admissible window of an operation."""


class DivergentMomentError(ParameterDomainError):
    """A radial moment integral is requested outside its integrability window."""


class SingularSymbolError(ParameterDomainError):
    """Negative-order symbol applied to input with a nonzero mean."""


class NormalizationError(ParameterDomainError):
    """Input required to be L^2-normalized is not."""


class DegenerateDirectionError(FraxError):
    """A directional derivative norm vanished; the affine energy is degenerate."""


class MeasureFormatError(FraxError, ValueError):
    """A discrete-measure file violates the expected CSV schema."""


class ConfigError(FraxError, ValueError):
    """A run configuration is invalid (bad flag value, missing input path)."""
