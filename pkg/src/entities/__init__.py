"""
Domain entities for the NLS well atlas.
"""
from src.entities.exponents import ExponentSet, as_fraction, conjugate
from src.entities.stats import (
    BoundCheck,
    EnergyBoundReport,
    FieldStats,
    WellStatus,
    WellVerdict,
)
from src.entities.profile import QNorms, RadialProfile, ShootingOptions
from src.entities.grid import CutoffProfile, FieldState, GridSpec
from src.entities.virial import VirialSample, VirialWeights
from src.entities.trajectory import (
    Checkpoint,
    Classification,
    EvolveControls,
    RunEvent,
    RunEventKind,
    TrajectoryRecord,
)
from src.entities.gronwall import GronwallInstance

__all__ = [
    "ExponentSet",
    "as_fraction",
    "conjugate",
    "BoundCheck",
    "EnergyBoundReport",
    "FieldStats",
    "WellStatus",
    "WellVerdict",
    "QNorms",
    "RadialProfile",
    "ShootingOptions",
    "CutoffProfile",
    "FieldState",
    "GridSpec",
    "VirialSample",
    "VirialWeights",
    "Checkpoint",
    "Classification",
    "EvolveControls",
    "RunEvent",
    "RunEventKind",
    "TrajectoryRecord",
    "GronwallInstance",
]
