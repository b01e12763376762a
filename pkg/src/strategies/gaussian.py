"""
Gaussian wave packets.
"""
import math
from typing import Optional

import numpy as np

from src.core.exceptions import ValidationError
from src.entities.exponents import ExponentSet
from src.entities.grid import FieldState, GridSpec
from src.entities.stats import FieldStats
from src.strategies.base import InitialDataRequest, InitialDataStrategy


class GaussianStrategy(InitialDataStrategy):
    """
    A exp(-|x - c|^2 / (2 w^2)) exp(i k.x).

    Closed-form statistics:
        M = A^2 (pi w^2)^{N/2}
        |grad u|^2 = M (N / (2 w^2) + |k|^2)
        |u|_{p+1}^{p+1} = A^{p+1} (2 pi w^2 / (p+1))^{N/2}
        P = k M
    """

    @property
    def family_name(self) -> str:
        return "gaussian"

    @staticmethod
    def _check(request: InitialDataRequest) -> None:
        if request.width <= 0:
            raise ValidationError(f"Gaussian width must be positive, got {request.width}")

    def sample(self, grid: GridSpec, exps: ExponentSet, request: InitialDataRequest) -> FieldState:
        self._check(request)
        center = request.vector("center", grid.N)
        kick = request.vector("kick", grid.N)
        offset2 = sum((x - c) ** 2 for x, c in zip(grid.coordinates, center))
        phase = sum(k * x for k, x in zip(kick, grid.coordinates))
        values = request.amplitude * np.exp(-offset2 / (2.0 * request.width ** 2) + 1j * phase)
        return FieldState(grid=grid, values=values * np.ones(grid.shape))

    def exact_stats(self, exps: ExponentSet, request: InitialDataRequest) -> Optional[FieldStats]:
        self._check(request)
        N, p = exps.N, float(exps.p)
        kick = request.vector("kick", N)
        w2 = request.width ** 2
        mass = request.amplitude ** 2 * (math.pi * w2) ** (N / 2.0)
        return FieldStats.from_norms(
            mass=mass,
            grad2=mass * (N / (2.0 * w2) + sum(k * k for k in kick)),
            pot=abs(request.amplitude) ** (p + 1.0) * (2.0 * math.pi * w2 / (p + 1.0)) ** (N / 2.0),
            p=p,
            momentum=tuple(k * mass for k in kick),
        )
