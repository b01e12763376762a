"""
Custom exceptions for the NLS well atlas.
"""


class AtlasError(Exception):
    """Base exception for atlas errors."""

    def __init__(self, message: str, exit_code: int = 4):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class ValidationError(AtlasError):
    """Exception raised for invalid input data."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class ConfigError(AtlasError):
    """Exception raised for unreadable or inconsistent run configuration."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class PowerOutOfRange(AtlasError):
    """The power p is outside the mass-supercritical, energy-subcritical range."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class PreconditionViolated(AtlasError):
    """A hypothesis of an estimate does not hold for the given data."""


class NoBracketFound(AtlasError):
    """The shooting bracket on Q(0) does not separate the two behaviours."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=3)


class NotConverged(AtlasError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=3)


class NonFiniteField(AtlasError):
    """A field sample became NaN or infinite."""

    def __init__(self, message: str, time: float = float("nan")):
        self.time = time
        super().__init__(message)


class ZeroMass(AtlasError):
    """Operation undefined for a field with zero mass."""


class DispersalInsufficient(AtlasError):
    """The free flow did not shrink the L^{p+1} norm enough."""


class RadiusExceedsBox(AtlasError):
    """Virial weights would reach past the periodic box."""


class InsufficientCheckpoints(AtlasError):
    """Too few checkpoints for a finite-difference or Cauchy diagnostic."""


class HypothesisFails(AtlasError):
    """A Gronwall instance does not satisfy the hypothesis inequality."""
