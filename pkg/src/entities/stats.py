"""
Scalar statistics of a field and the potential-well verdicts built on them.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple


@dataclass(frozen=True)
class FieldStats:
    """
    Integral statistics of a field, decoupled from any grid.

    Attributes:
        mass: Squared L^2 norm
        grad2: Squared L^2 norm of the gradient
        pot: (p+1)-th power of the L^{p+1} norm
        energy: grad2/2 - pot/(p+1)
        momentum: Im of the integral of conj(u) grad u, one entry per axis
    """
    mass: float
    grad2: float
    pot: float
    energy: float
    momentum: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        """Validate nonnegativity of the norms."""
        for name in ("mass", "grad2", "pot"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")

    @classmethod
    def from_norms(
        cls,
        mass: float,
        grad2: float,
        pot: float,
        p: float,
        momentum: Tuple[float, ...] = (),
    ) -> "FieldStats":
        """Build stats with the energy computed from its definition."""
        energy = 0.5 * grad2 - pot / (float(p) + 1.0)
        return cls(
            mass=float(mass),
            grad2=float(grad2),
            pot=float(pot),
            energy=float(energy),
            momentum=tuple(float(m) for m in momentum),
        )

    @property
    def momentum_norm2(self) -> float:
        """Squared Euclidean norm of the momentum vector."""
        return sum(m * m for m in self.momentum)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "mass": self.mass,
            "grad2": self.grad2,
            "pot": self.pot,
            "energy": self.energy,
            "momentum": list(self.momentum),
        }


class WellVerdict(str, Enum):
    """Position of a field relative to the potential well."""
    INSIDE_WELL = "InsideWell"
    OUTSIDE_WELL_ABOVE_GRADIENT = "OutsideWellAboveGradient"
    ABOVE_ENERGY_THRESHOLD = "AboveEnergyThreshold"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class WellStatus:
    """
    Scale-invariant well ratios of a field.

    Attributes:
        omega: E M^sigma over its ground-state value
        grad_ratio: |grad u| |u|^sigma over its ground-state value
        verdict: Well classification
    """
    omega: float
    grad_ratio: float
    verdict: WellVerdict

    @property
    def inside(self) -> bool:
        return self.verdict == WellVerdict.INSIDE_WELL

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "omega": self.omega,
            "gradRatio": self.grad_ratio,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class BoundCheck:
    """One inequality lhs >= rhs (or lhs <= rhs) with its verdict."""
    name: str
    lhs: float
    rhs: float
    satisfied: bool

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class EnergyBoundReport:
    """
    The three energy inequalities valid below the gradient threshold.

    Attributes:
        energy_lower: E >= (N(p-1)-4)/(2N(p-1)) |grad u|^2
        gradient_upper: |grad u||u|^sigma <= sqrt(omega) * thr_grad
        virial_lower: R(u) >= 8 (1 - omega^{(N(p-1)-4)/4}) |grad u|^2
    """
    energy_lower: BoundCheck
    gradient_upper: BoundCheck
    virial_lower: BoundCheck

    @property
    def checks(self) -> Tuple[BoundCheck, BoundCheck, BoundCheck]:
        return (self.energy_lower, self.gradient_upper, self.virial_lower)

    @property
    def all_satisfied(self) -> bool:
        return all(check.satisfied for check in self.checks)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {check.name: check.to_dict() for check in self.checks}
