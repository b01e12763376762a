"""
Fourier kernel on the periodic box: norms, free propagator and frequency cutoff.
"""
from dataclasses import dataclass
import math
from typing import List, Tuple

import numpy as np
import scipy.fft
from scipy.integrate import quad

from src.core.exceptions import ValidationError
from src.entities.exponents import ExponentSet
from src.entities.grid import CutoffProfile, FieldState, GridSpec
from src.entities.stats import BoundCheck, FieldStats
from src.services.ground_state_solver import GroundStateSolver


@dataclass(frozen=True)
class CutoffBoundReport:
    """
    Pointwise bound |(chi_r * u)(0)| <= kappa r^{(N-2L)/2} |u|_{H^L} + |<u>|.

    Attributes:
        lhs: |(chi_r * u)(0)|
        rhs: The bound, continuum normalization included
        kappa: (integral over |xi| < 2 of |xi|^{-2L})^{1/2}
        zero_mode: |box average of u|, the lattice mode with no continuum analogue
        holds: lhs <= rhs
    """
    lhs: float
    rhs: float
    kappa: float
    zero_mode: float
    holds: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else 0.0


class SpectralCalculus:
    """
    Discrete Fourier machinery standing in for R^N.

    Transforms are unnormalized scipy.fft transforms; a factor
    cell_volume / points^N turns sums of |u_hat|^2 into L^2 integrals.
    """

    # Fraction of k_max beyond which the spectral tail is measured
    TAIL_START = 2.0 / 3.0

    @classmethod
    def transform(cls, field: FieldState) -> np.ndarray:
        return scipy.fft.fftn(field.values)

    @classmethod
    def inverse(cls, spectrum: np.ndarray) -> np.ndarray:
        return scipy.fft.ifftn(spectrum)

    @classmethod
    def _parseval_weight(cls, field: FieldState) -> float:
        return field.grid.cell_volume / field.values.size

    @classmethod
    def lebesgue_norm(cls, field: FieldState, q: float) -> float:
        """
        |u|_{L^q} by the rectangle rule (spectrally accurate on the torus).

        Args:
            field: The field
            q: Exponent in [1, inf]

        Returns:
            The norm; the maximum modulus for q = inf
        """
        if not q >= 1:
            raise ValidationError(f"Lebesgue exponent must be >= 1, got {q}")
        modulus = np.abs(field.values)
        if math.isinf(q):
            return float(modulus.max(initial=0.0))
        return float((np.sum(modulus ** q) * field.grid.cell_volume) ** (1.0 / q))

    @classmethod
    def sobolev_norm(cls, field: FieldState, s: float) -> float:
        """
        Homogeneous Sobolev norm (sum |xi|^{2s} |u_hat|^2)^{1/2}, Plancherel-normalized.

        Raises:
            ValidationError: If s is outside [0, 1]
        """
        if not 0.0 <= s <= 1.0:
            raise ValidationError(f"Sobolev order must lie in [0, 1], got {s}")
        power = np.abs(cls.transform(field)) ** 2
        if s > 0.0:
            power = power * field.grid.k2 ** s
        return float(math.sqrt(np.sum(power) * cls._parseval_weight(field)))

    @classmethod
    def h1_norm(cls, field: FieldState) -> float:
        """Inhomogeneous H^1 norm."""
        power = np.abs(cls.transform(field)) ** 2 * (1.0 + field.grid.k2)
        return float(math.sqrt(np.sum(power) * cls._parseval_weight(field)))

    @classmethod
    def gradient(cls, field: FieldState) -> List[np.ndarray]:
        """Spectral partial derivatives, Nyquist mode dropped."""
        spectrum = cls.transform(field)
        return [cls.inverse(1j * k * spectrum) for k in field.grid.derivative_wavevectors]

    @classmethod
    def momentum(cls, field: FieldState) -> Tuple[float, ...]:
        """P_j = Im of the integral of conj(u) d_j u, computed on the spectrum."""
        power = np.abs(cls.transform(field)) ** 2
        weight = cls._parseval_weight(field)
        return tuple(
            float(np.sum(k * power) * weight) for k in field.grid.derivative_wavevectors
        )

    @classmethod
    def field_stats(cls, field: FieldState, p: float) -> FieldStats:
        """Mass, gradient, potential and momentum of a sampled field."""
        r = float(p) + 1.0
        return FieldStats.from_norms(
            mass=cls.sobolev_norm(field, 0.0) ** 2,
            grad2=cls.sobolev_norm(field, 1.0) ** 2,
            pot=cls.lebesgue_norm(field, r) ** r,
            p=float(p),
            momentum=cls.momentum(field),
        )

    @classmethod
    def tail_fraction(cls, field: FieldState) -> float:
        """Share of |grad u|^2 carried by |xi| > (2/3) k_max."""
        grid = field.grid
        density = np.abs(cls.transform(field)) ** 2 * grid.k2
        total = float(np.sum(density))
        if total == 0.0:
            return 0.0
        tail = float(np.sum(density[grid.k_abs > cls.TAIL_START * grid.k_max]))
        return tail / total

    @classmethod
    def free_propagate(cls, field: FieldState, t: float) -> FieldState:
        """Apply e^{it Lap}: multiply u_hat by e^{-it|xi|^2} and advance the clock by t."""
        if t == 0.0:
            return field.copy()
        spectrum = cls.transform(field) * np.exp(-1j * t * field.grid.k2)
        return field.replace(cls.inverse(spectrum), time=field.time + t)

    @classmethod
    def cutoff_apply(cls, field: FieldState, profile: CutoffProfile) -> FieldState:
        """chi_r * u realized as the multiplier zeta(|xi|/r)."""
        spectrum = cls.transform(field) * profile.multiplier(field.grid.k_abs)
        return field.replace(cls.inverse(spectrum))

    @classmethod
    def kappa_constant(cls, N: int, lam: float) -> Tuple[float, float]:
        """
        kappa = (integral over |xi| < 2 of |xi|^{-2 lam})^{1/2}.

        Returns:
            (by quadrature, closed form sqrt(|S^{N-1}| 2^{N-2lam} / (N-2lam)))
        """
        if not lam < N / 2.0:
            raise ValidationError(f"Need lam < N/2 for an integrable weight, got {lam}")
        surface = GroundStateSolver.surface_area(N)
        exponent = N - 1.0 - 2.0 * lam
        radial, _ = quad(lambda rho: 1.0, 0.0, 2.0, weight="alg", wvar=(exponent, 0.0))
        closed = surface * 2.0 ** (N - 2.0 * lam) / (N - 2.0 * lam)
        return math.sqrt(surface * radial), math.sqrt(closed)

    @classmethod
    def cutoff_pointwise_bound(
        cls, field: FieldState, profile: CutoffProfile, exps: ExponentSet
    ) -> CutoffBoundReport:
        """
        Evaluate both sides of the pointwise bound on the low-frequency part at x = 0.

        The continuum bound carries the Fourier normalization (2 pi)^{-N/2};
        the box average is added since the periodic zero mode is not
        controlled by a homogeneous norm.
        """
        grid = field.grid
        lam = float(exps.lam)
        kappa, _ = cls.kappa_constant(grid.N, lam)

        filtered = cls.cutoff_apply(field, profile)
        origin = (grid.points // 2,) * grid.N
        lhs = float(abs(filtered.values[origin]))

        zero_mode = float(abs(np.mean(field.values)))
        scale = profile.r ** ((grid.N - 2.0 * lam) / 2.0)
        normalization = (2.0 * math.pi) ** (-grid.N / 2.0)
        rhs = normalization * kappa * scale * cls.sobolev_norm(field, lam) + zero_mode

        return CutoffBoundReport(
            lhs=lhs,
            rhs=rhs,
            kappa=kappa,
            zero_mode=zero_mode,
            holds=lhs <= rhs * (1.0 + 1e-12),
        )

    @classmethod
    def cutoff_inequalities(
        cls, field: FieldState, profile: CutoffProfile, exps: ExponentSet, lam: float
    ) -> List[BoundCheck]:
        """
        The three cutoff estimates for one field at Sobolev order lam.

        contraction: |chi_r * u|_{H^lam} <= |u|_{H^lam}
        remainder: |u - chi_r * u|_{H^lam} <= r^{-(1-lam)} |grad u|
        pointwise: the bound of cutoff_pointwise_bound
        """
        slack = 1.0 + 1e-12
        filtered = cls.cutoff_apply(field, profile)
        rest = field.replace(field.values - filtered.values)

        full = cls.sobolev_norm(field, lam)
        low = cls.sobolev_norm(filtered, lam)
        high = cls.sobolev_norm(rest, lam)
        high_bound = profile.r ** (lam - 1.0) * cls.sobolev_norm(field, 1.0)
        pointwise = cls.cutoff_pointwise_bound(field, profile, exps)

        return [
            BoundCheck("contraction", low, full, low <= full * slack),
            BoundCheck("remainder", high, high_bound, high <= high_bound * slack),
            BoundCheck("pointwise", pointwise.lhs, pointwise.rhs, pointwise.holds),
        ]

    @classmethod
    def band_limited_field(
        cls, grid: GridSpec, rng: np.random.Generator, k_cut: float, zero_mean: bool = True
    ) -> FieldState:
        """Random field whose spectrum lives in |xi| <= k_cut (zero mode removed by default)."""
        spectrum = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        spectrum[grid.k_abs > k_cut] = 0.0
        if zero_mean:
            spectrum[(0,) * grid.N] = 0.0
        return FieldState(grid=grid, values=cls.inverse(spectrum))
