"""
Core utilities including custom exceptions.
"""
from src.core.exceptions import (
    AtlasError,
    ConfigError,
    DispersalInsufficient,
    HypothesisFails,
    InsufficientCheckpoints,
    NoBracketFound,
    NonFiniteField,
    NotConverged,
    PowerOutOfRange,
    PreconditionViolated,
    RadiusExceedsBox,
    ValidationError,
    ZeroMass,
)

__all__ = [
    "AtlasError",
    "ConfigError",
    "DispersalInsufficient",
    "HypothesisFails",
    "InsufficientCheckpoints",
    "NoBracketFound",
    "NonFiniteField",
    "NotConverged",
    "PowerOutOfRange",
    "PreconditionViolated",
    "RadiusExceedsBox",
    "ValidationError",
    "ZeroMass",
]
