"""
Evolution controls and the append-only trajectory record.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from src.entities.grid import FieldState
from src.entities.stats import FieldStats, WellStatus
from src.entities.virial import VirialSample


@dataclass(frozen=True)
class EvolveControls:
    """
    Time-stepping and guard settings for one evolution run.

    Attributes:
        dt: Base time step
        t_end: Final time
        checkpoint_every: Number of base steps between diagnostics
        blowup_gradient_factor: Gradient norm growth that counts as blow-up
        resolution_fraction: Largest admissible share of |grad u|^2 in the
            outer third of the frequency lattice
        max_phase: Cap on the nonlinear phase rotation per substep; base steps
            are subdivided to respect it. None disables subdivision.
        nonlinear: Switch for the nonlinear substep (off gives the free flow)
        keep_fields: Store the field at every checkpoint
    """
    dt: float = 1e-3
    t_end: float = 1.0
    checkpoint_every: int = 10
    blowup_gradient_factor: float = 10.0
    resolution_fraction: float = 1e-3
    max_phase: Optional[float] = 0.05
    nonlinear: bool = True
    keep_fields: bool = False

    def __post_init__(self):
        """Validate control ranges."""
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.checkpoint_every < 1:
            raise ValueError("checkpoint_every must be at least 1")
        if self.blowup_gradient_factor <= 1:
            raise ValueError("blowup_gradient_factor must exceed 1")
        if not 0 < self.resolution_fraction < 1:
            raise ValueError("resolution_fraction must lie in (0, 1)")
        if self.max_phase is not None and self.max_phase <= 0:
            raise ValueError("max_phase must be positive when set")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "dt": self.dt,
            "tEnd": self.t_end,
            "checkpointEvery": self.checkpoint_every,
            "blowupGradientFactor": self.blowup_gradient_factor,
            "resolutionFraction": self.resolution_fraction,
            "maxPhase": self.max_phase,
            "nonlinear": self.nonlinear,
        }


class RunEventKind(str, Enum):
    """Terminal events of an evolution run."""
    BLOW_UP_GUARD = "BlowUpGuard"
    RESOLUTION_LOSS = "ResolutionLoss"
    COMPLETED = "Completed"


class Classification(str, Enum):
    """Outcome of a run with respect to the global/blow-up dichotomy."""
    GLOBAL_IN_WELL = "GlobalInWell"
    BLOW_UP_DETECTED = "BlowUpDetected"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class RunEvent:
    """A terminal event with its time and diagnostic payload."""
    kind: RunEventKind
    time: float
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {"kind": self.kind.value, "time": self.time, "detail": self.detail}


@dataclass(frozen=True)
class Checkpoint:
    """
    Diagnostics at one checkpoint time.

    Attributes:
        t: Time
        stats: Conserved quantities and norms
        grad_product: |grad u| |u|^sigma
        well: Well ratios and verdict
        lr_norm: L^{p+1} norm
        accumulated: Running integral of |u|_{L^r}^a over [0, t]
        tail_fraction: Spectral-tail share of |grad u|^2
    """
    t: float
    stats: FieldStats
    grad_product: float
    well: WellStatus
    lr_norm: float
    accumulated: float
    tail_fraction: float


@dataclass
class TrajectoryRecord:
    """
    Append-only time series of one run.

    Attributes:
        checkpoints: Diagnostics in increasing time order
        events: Terminal events (exactly one once finished)
        classification: Dichotomy verdict, set when finished
        initial_well: Well status of the initial data
        steps: Base steps taken
        substeps: Total substeps including subdivisions
        virial: Virial samples at checkpoints, when weights were given
        snapshots: Checkpoint fields, when requested
        final_field: Field at the last completed step
    """
    initial_well: WellStatus
    checkpoints: List[Checkpoint] = field(default_factory=list)
    events: List[RunEvent] = field(default_factory=list)
    classification: Optional[Classification] = None
    steps: int = 0
    substeps: int = 0
    virial: List[VirialSample] = field(default_factory=list)
    snapshots: List[FieldState] = field(default_factory=list)
    final_field: Optional[FieldState] = None

    def add_checkpoint(self, checkpoint: Checkpoint) -> None:
        """Append a checkpoint, keeping times strictly increasing."""
        if self.classification is not None:
            raise ValueError("Trajectory is already finished")
        if self.checkpoints and checkpoint.t <= self.checkpoints[-1].t:
            raise ValueError(
                f"Checkpoint time {checkpoint.t} does not increase past {self.checkpoints[-1].t}"
            )
        self.checkpoints.append(checkpoint)

    def finish(self, event: RunEvent, classification: Classification) -> None:
        """Record the single terminal event and the classification."""
        if self.events:
            raise ValueError("Trajectory already has a terminal event")
        self.events.append(event)
        self.classification = classification

    @property
    def terminal_event(self) -> Optional[RunEvent]:
        return self.events[-1] if self.events else None

    @property
    def t_event(self) -> Optional[float]:
        """Time of the guard that stopped the run, None if it completed."""
        event = self.terminal_event
        if event is None or event.kind == RunEventKind.COMPLETED:
            return None
        return event.time

    def to_dict(self) -> dict:
        """Convert summary data to dictionary representation."""
        return {
            "classification": self.classification.value if self.classification else None,
            "events": [event.to_dict() for event in self.events],
            "initialWell": self.initial_well.to_dict(),
            "checkpoints": len(self.checkpoints),
            "steps": self.steps,
            "substeps": self.substeps,
            "tEvent": self.t_event,
        }
