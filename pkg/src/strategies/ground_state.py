"""
Initial data built from the ground state: amplitude family and dilation family.
"""
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from src.core.exceptions import ValidationError
from src.entities.exponents import ExponentSet
from src.entities.grid import FieldState, GridSpec
from src.entities.profile import QNorms, RadialProfile
from src.entities.stats import FieldStats
from src.services.well_calculator import WellCalculator
from src.strategies.base import InitialDataRequest, InitialDataStrategy


def sample_profile(profile: RadialProfile, radius: np.ndarray) -> np.ndarray:
    """Q at the given radii by cubic Hermite interpolation, zero beyond the last node."""
    spline = CubicHermiteSpline(profile.r, profile.q, profile.dq, extrapolate=False)
    values = spline(np.minimum(radius, profile.r_max))
    return np.where(radius <= profile.r_max, values, 0.0)


class GroundStateStrategy(InitialDataStrategy):
    """Shared plumbing for families derived from Q."""

    def __init__(self, ground_states):
        """
        Args:
            ground_states: Store with get_or_solve(exps) -> GroundStateEntry
        """
        self._ground_states = ground_states

    def _entry(self, exps: ExponentSet):
        entry = self._ground_states.get_or_solve(exps)
        return entry.profile, entry.norms

    @staticmethod
    def _profile_stats(norms: QNorms, exps: ExponentSet) -> FieldStats:
        return FieldStats.from_norms(norms.mass, norms.grad2, norms.pot, float(exps.p))

    @staticmethod
    def _check_lambda(request: InitialDataRequest) -> float:
        if request.lam < 0:
            raise ValidationError(f"Family parameter lambda must be nonnegative, got {request.lam}")
        return request.lam


class ScaledGroundStateStrategy(GroundStateStrategy):
    """
    lam * Q.

    Below lam = 1 the data lie inside the well, above it they exceed
    the gradient threshold.
    """

    @property
    def family_name(self) -> str:
        return "scaledQ"

    def sample(self, grid: GridSpec, exps: ExponentSet, request: InitialDataRequest) -> FieldState:
        lam = self._check_lambda(request)
        profile, _ = self._entry(exps)
        radius = grid.radius * np.ones(grid.shape)
        return FieldState(grid=grid, values=lam * sample_profile(profile, radius))

    def exact_stats(self, exps: ExponentSet, request: InitialDataRequest) -> Optional[FieldStats]:
        _, norms = self._entry(exps)
        return WellCalculator.amplitude_transform(
            self._profile_stats(norms, exps), self._check_lambda(request), exps
        )


class DilatedGroundStateStrategy(GroundStateStrategy):
    """lam^{2/(p-1)} Q(lam x), a critical rescaling that keeps the well ratios of Q."""

    @property
    def family_name(self) -> str:
        return "dilatedQ"

    def sample(self, grid: GridSpec, exps: ExponentSet, request: InitialDataRequest) -> FieldState:
        lam = self._check_lambda(request)
        if lam == 0:
            raise ValidationError("Dilation factor must be positive")
        profile, _ = self._entry(exps)
        radius = lam * grid.radius * np.ones(grid.shape)
        amplitude = lam ** (2.0 / float(exps.alpha))
        return FieldState(grid=grid, values=amplitude * sample_profile(profile, radius))

    def exact_stats(self, exps: ExponentSet, request: InitialDataRequest) -> Optional[FieldStats]:
        _, norms = self._entry(exps)
        return WellCalculator.scaling_transform(
            self._profile_stats(norms, exps), self._check_lambda(request), exps
        )
