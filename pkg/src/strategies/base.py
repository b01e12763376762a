"""
Base initial-data strategy interface.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.entities.exponents import ExponentSet
from src.entities.grid import FieldState, GridSpec
from src.entities.stats import FieldStats


@dataclass(frozen=True)
class InitialDataRequest:
    """
    Parameters of an initial-data family.

    Attributes:
        family: Registered family name
        lam: Family parameter (amplitude for scaledQ, dilation for dilatedQ)
        amplitude: Gaussian peak amplitude
        width: Gaussian width w in exp(-|x - c|^2 / (2 w^2))
        center: Gaussian center (padded with zeros to N entries)
        kick: Momentum kick k in exp(i k.x) (padded with zeros)
        path: Field binary for the file family
    """
    family: str
    lam: float = 1.0
    amplitude: float = 1.0
    width: float = 1.0
    center: Tuple[float, ...] = ()
    kick: Tuple[float, ...] = ()
    path: Optional[str] = None

    def vector(self, name: str, N: int) -> Tuple[float, ...]:
        """center or kick padded to N components."""
        values = tuple(getattr(self, name))
        if len(values) > N:
            raise ValueError(f"{name} has {len(values)} components, grid has {N}")
        return values + (0.0,) * (N - len(values))

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "family": self.family,
            "lambda": self.lam,
            "amplitude": self.amplitude,
            "width": self.width,
            "center": list(self.center),
            "kick": list(self.kick),
            "path": self.path,
        }


@dataclass
class InitialData:
    """Sampled initial data with the analytic statistics when the family has them."""
    field: FieldState
    request: InitialDataRequest
    exact_stats: Optional[FieldStats] = None
    notes: dict = field(default_factory=dict)


class InitialDataStrategy(ABC):
    """
    Abstract base class for initial-data families.

    Each family defines:
    - A registered name
    - How to sample the data on a grid
    - Optionally, exact statistics independent of the grid
    """

    @property
    @abstractmethod
    def family_name(self) -> str:
        """Name the family is registered under."""
        pass

    @abstractmethod
    def sample(self, grid: GridSpec, exps: ExponentSet, request: InitialDataRequest) -> FieldState:
        """Sample the data on a grid at t = 0."""
        pass

    def exact_stats(
        self, exps: ExponentSet, request: InitialDataRequest
    ) -> Optional[FieldStats]:
        """Statistics in closed form, None when the family has none."""
        return None

    def build(self, grid: GridSpec, exps: ExponentSet, request: InitialDataRequest) -> InitialData:
        """
        Sample the data and attach its exact statistics.

        Args:
            grid: Sampling grid
            exps: Exponent set
            request: Family parameters

        Returns:
            InitialData
        """
        return InitialData(
            field=self.sample(grid, exps, request),
            request=request,
            exact_stats=self.exact_stats(exps, request),
        )
