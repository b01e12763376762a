"""
Localized virial machinery: truncated center of mass and localized variance.
"""
from dataclasses import dataclass
import logging
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from src.core.exceptions import InsufficientCheckpoints, RadiusExceedsBox, ValidationError
from src.entities.exponents import ExponentSet
from src.entities.grid import FieldState, GridSpec
from src.entities.stats import FieldStats
from src.entities.virial import VirialSample, VirialWeights
from src.services.spectral import SpectralCalculus

logger = logging.getLogger(__name__)


def hermite_patch(left: Sequence[float], right: Sequence[float]) -> Polynomial:
    """
    Polynomial on [0, 1] with prescribed derivatives at both ends.

    Args:
        left: Value, first, second, ... derivative at s = 0
        right: The same at s = 1 (same length as left)

    Returns:
        The unique polynomial of degree 2m - 1 matching all 2m conditions
    """
    m = len(left)
    if len(right) != m:
        raise ValueError("Both ends need the same number of conditions")
    degree = 2 * m
    rows, rhs = [], []
    for s0, values in ((0.0, left), (1.0, right)):
        for order, value in enumerate(values):
            row = np.zeros(degree)
            for k in range(order, degree):
                falling = np.prod(np.arange(k - order + 1, k + 1)) if order else 1.0
                row[k] = falling * s0 ** (k - order)
            rows.append(row)
            rhs.append(value)
    return Polynomial(np.linalg.solve(np.array(rows), np.array(rhs)))


@dataclass(frozen=True)
class FdCrosscheckReport:
    """
    Finite-difference consistency of the virial derivative formulas.

    Attributes:
        first_error: max |FD(ZR) - ZR'| relative to max |ZR'|
        second_error: max |FD(ZR') - ZR''| relative to max |ZR''|
        first_abs: Absolute version of first_error
        second_abs: Absolute version of second_error
        spacing: Checkpoint spacing
        points: Number of samples used
    """
    first_error: float
    second_error: float
    first_abs: float
    second_abs: float
    spacing: float
    points: int

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "firstError": self.first_error,
            "secondError": self.second_error,
            "firstAbs": self.first_abs,
            "secondAbs": self.second_abs,
            "spacing": self.spacing,
            "points": self.points,
        }


@dataclass(frozen=True)
class CoercivityReport:
    """ZR'' >= 2 eta E(u0) along a run."""
    eta: float
    lower_bound: float
    worst_margin: float
    holds: bool

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "eta": self.eta,
            "lowerBound": self.lower_bound,
            "worstMargin": self.worst_margin,
            "holds": self.holds,
        }


class VirialCalculator:
    """
    Weights chi_R, theta_R and the quadratures of the local virial identity.

    chi is r^2 on [0, 1], 0 on [2, inf) and a degree-7 Hermite patch in
    between (C^3, so the bi-Laplacian stays bounded). theta is 1 on [0, 1],
    0 on [2, inf) with the quintic smoothstep in between (|theta'| <= 15/8).
    """

    CHI_PATCH = hermite_patch([1.0, 2.0, 2.0, 0.0], [0.0, 0.0, 0.0, 0.0])
    THETA_PATCH = hermite_patch([1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    MIN_FD_POINTS = 5

    @classmethod
    def chi_profile(cls, rho: np.ndarray, order: int = 0) -> np.ndarray:
        """Derivative of the given order of the unit weight chi at radii rho."""
        rho = np.asarray(rho, dtype=float)
        inner = [rho ** 2, 2.0 * rho, 2.0 * np.ones_like(rho)]
        out = inner[order] if order < 3 else np.zeros_like(rho)
        out = np.where(rho <= 1.0, out, 0.0)
        band = (rho > 1.0) & (rho < 2.0)
        patch = cls.CHI_PATCH.deriv(order) if order else cls.CHI_PATCH
        return np.where(band, patch(rho - 1.0), out)

    @classmethod
    def theta_profile(cls, rho: np.ndarray, order: int = 0) -> np.ndarray:
        """theta or theta' at radii rho."""
        rho = np.asarray(rho, dtype=float)
        out = np.where(rho <= 1.0, 1.0 if order == 0 else 0.0, 0.0)
        band = (rho > 1.0) & (rho < 2.0)
        patch = cls.THETA_PATCH.deriv(order) if order else cls.THETA_PATCH
        return np.where(band, patch(rho - 1.0), out)

    @classmethod
    def make_weights(cls, R: float, grid: GridSpec) -> VirialWeights:
        """
        Sample chi_R, theta_R and their derivatives on a grid.

        Raises:
            ValidationError: If R is not positive
            RadiusExceedsBox: If 2R is beyond the box half-width
        """
        if R <= 0:
            raise ValidationError(f"Localization radius must be positive, got {R}")
        if 2.0 * R > grid.extent:
            raise RadiusExceedsBox(
                f"Weights reach r = {2.0 * R} beyond the box half-width {grid.extent}"
            )
        N = grid.N
        r = grid.radius * np.ones(grid.shape)
        rho = r / R
        inner = rho <= 1.0
        safe_r = np.where(inner, 1.0, r)

        chi = R * R * cls.chi_profile(rho)
        d1 = R * cls.chi_profile(rho, 1)
        d2 = cls.chi_profile(rho, 2)
        d3 = cls.chi_profile(rho, 3) / R
        d4 = cls.chi_profile(rho, 4) / (R * R)

        over_r = np.where(inner, 2.0, d1 / safe_r)
        lap = np.where(inner, 2.0 * N, d2 + (N - 1) * d1 / safe_r)
        bilap = np.where(
            inner,
            0.0,
            d4
            + 2.0 * (N - 1) * d3 / safe_r
            + (N - 1) * (N - 3) * d2 / safe_r ** 2
            - (N - 1) * (N - 3) * d1 / safe_r ** 3,
        )

        sample = np.linspace(0.0, 2.0, 10001)
        bound = float(np.max(np.abs(cls.chi_profile(sample, 1))))

        return VirialWeights(
            R=R,
            grid=grid,
            chi=chi,
            chi_prime=d1,
            chi_prime_over_r=over_r,
            chi_second=d2,
            lap_chi=lap,
            bilap_chi=bilap,
            theta=cls.theta_profile(rho),
            theta_prime=cls.theta_profile(rho, 1) / R,
            chi_prime_bound=bound,
        )

    @classmethod
    def sample_virial(
        cls,
        field: FieldState,
        weights: VirialWeights,
        exps: ExponentSet,
        nonlinear: bool = True,
    ) -> VirialSample:
        """
        Evaluate z_R, Z_R and their time derivatives by quadrature.

        Args:
            field: The field
            weights: Weights sampled on the field's grid
            exps: Exponent set
            nonlinear: Include the potential terms (off for the free flow)

        Returns:
            VirialSample at the field's time
        """
        grid = field.grid
        if weights.grid != grid:
            raise ValidationError("Virial weights were sampled on a different grid")
        cell = grid.cell_volume
        u = field.values
        conj_u = np.conj(u)
        density = np.abs(u) ** 2
        grads = SpectralCalculus.gradient(field)
        grad_sq = sum(np.abs(g) ** 2 for g in grads)

        r = grid.radius
        safe_r = np.where(r > 0.0, r, 1.0)
        units = [np.where(r > 0.0, x / safe_r, 0.0) for x in grid.coordinates]
        radial = sum(e * g for e, g in zip(units, grads))

        zR = tuple(float(np.sum(x * weights.theta * density) * cell) for x in grid.coordinates)
        zR_prime = tuple(
            float(
                2.0 * np.sum(
                    np.imag(conj_u * (weights.theta * g + x * weights.theta_prime * radial))
                ) * cell
            )
            for x, g in zip(grid.coordinates, grads)
        )
        ZR = float(np.sum(weights.chi * density) * cell)
        ZR_prime = float(2.0 * np.sum(weights.chi_prime * np.imag(conj_u * radial)) * cell)

        grad2 = SpectralCalculus.sobolev_norm(field, 1.0) ** 2
        corrections = (
            4.0 * np.sum((weights.chi_prime_over_r - 2.0) * grad_sq)
            + 4.0 * np.sum((weights.chi_second - weights.chi_prime_over_r) * np.abs(radial) ** 2)
            - np.sum(density * weights.bilap_chi)
        ) * cell
        if nonlinear:
            r_exp = float(exps.r)
            pot_density = np.abs(u) ** r_exp
            pot = float(np.sum(pot_density) * cell)
            virial = 8.0 * grad2 - 4.0 * float(exps.N * exps.alpha / exps.r) * pot
            corrections += (
                2.0 * float(exps.alpha / exps.r)
                * np.sum((2.0 * grid.N - weights.lap_chi) * pot_density) * cell
            )
        else:
            virial = 8.0 * grad2

        outer = weights.outer
        outer_h1 = float(np.sum((grad_sq + density)[outer]) * cell)

        return VirialSample(
            t=field.time,
            zR=zR,
            zR_prime=zR_prime,
            ZR=ZR,
            ZR_prime=ZR_prime,
            ZR_second=float(virial + corrections),
            R_functional=float(virial),
            outer_h1=outer_h1,
        )

    @classmethod
    def fd_crosscheck(cls, samples: Sequence[VirialSample]) -> FdCrosscheckReport:
        """
        Compare central differences of ZR and ZR' with the analytic derivatives.

        Raises:
            InsufficientCheckpoints: With fewer than five samples
            ValidationError: If the samples are not uniformly spaced
        """
        if len(samples) < cls.MIN_FD_POINTS:
            raise InsufficientCheckpoints(
                f"Need at least {cls.MIN_FD_POINTS} checkpoints, got {len(samples)}"
            )
        t = np.array([s.t for s in samples])
        steps = np.diff(t)
        h = float(steps.mean())
        if np.max(np.abs(steps - h)) > 1e-9 * max(h, 1.0):
            raise ValidationError("Virial samples must be uniformly spaced in time")

        Z = np.array([s.ZR for s in samples])
        Z1 = np.array([s.ZR_prime for s in samples])
        Z2 = np.array([s.ZR_second for s in samples])

        fd1 = (Z[2:] - Z[:-2]) / (2.0 * h)
        fd2 = (Z1[2:] - Z1[:-2]) / (2.0 * h)
        first_abs = float(np.max(np.abs(fd1 - Z1[1:-1])))
        second_abs = float(np.max(np.abs(fd2 - Z2[1:-1])))
        first_scale = max(float(np.max(np.abs(Z1[1:-1]))), 1e-12 * float(np.max(np.abs(Z))) / h)
        second_scale = max(float(np.max(np.abs(Z2[1:-1]))), 1e-12 * float(np.max(np.abs(Z1))) / h)

        return FdCrosscheckReport(
            first_error=first_abs / first_scale if first_scale > 0 else 0.0,
            second_error=second_abs / second_scale if second_scale > 0 else 0.0,
            first_abs=first_abs,
            second_abs=second_abs,
            spacing=h,
            points=len(samples),
        )

    @classmethod
    def coercivity(
        cls, samples: Sequence[VirialSample], eta: float, initial: FieldStats
    ) -> CoercivityReport:
        """Check ZR'' >= 2 eta E(u0) at every sample; eta is fixed from the initial data."""
        bound = 2.0 * eta * initial.energy
        margins: List[float] = [s.ZR_second - bound for s in samples]
        worst = min(margins) if margins else 0.0
        return CoercivityReport(eta=eta, lower_bound=bound, worst_margin=worst, holds=worst >= 0.0)

    @classmethod
    def effective_radius(cls, field: FieldState, fraction: float = 0.99) -> float:
        """Smallest radius holding the given fraction of the mass."""
        density = (np.abs(field.values) ** 2).ravel()
        r = (field.grid.radius * np.ones(field.grid.shape)).ravel()
        order = np.argsort(r, kind="stable")
        cumulative = np.cumsum(density[order])
        if cumulative[-1] == 0.0:
            return 0.0
        index = int(np.searchsorted(cumulative, fraction * cumulative[-1]))
        return float(r[order][min(index, r.size - 1)])

    @classmethod
    def momentum_free_bound(cls, sample: VirialSample) -> float:
        """5 times the H^1 mass outside r = R, bounding |z_R'| for zero-momentum fields."""
        return 5.0 * sample.outer_h1

    @classmethod
    def variance_rate_bound(
        cls, weights: VirialWeights, stats: FieldStats
    ) -> Tuple[float, float]:
        """(C, C R |u|_2 |grad u|_2) with C = 2 sup|chi'| bounding |Z_R'|."""
        constant = 2.0 * weights.chi_prime_bound
        return constant, constant * weights.R * np.sqrt(stats.mass * stats.grad2)
