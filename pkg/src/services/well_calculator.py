"""
Exponent system, potential-well geometry and energy inequalities.
"""
from fractions import Fraction
import math
from typing import Tuple

from src.core.exceptions import PowerOutOfRange, PreconditionViolated, ValidationError, ZeroMass
from src.entities.exponents import ExponentSet, Number, as_fraction
from src.entities.profile import QNorms
from src.entities.stats import (
    BoundCheck,
    EnergyBoundReport,
    FieldStats,
    WellStatus,
    WellVerdict,
)


class WellCalculator:
    """
    Pure functions on scalar field statistics.

    The well K is the set of data with E M^sigma < E(Q) M(Q)^sigma and
    |grad u| |u|^sigma < |grad Q| |Q|^sigma. Everything here works on
    FieldStats and QNorms only, so no grid or solver is involved.
    """

    # Relative band around 1 in which a ratio counts as on the boundary
    BOUNDARY_TOLERANCE = 1e-6
    # |P| below this fraction of |u|_2 |grad u|_2 counts as zero momentum
    MOMENTUM_TOLERANCE = 1e-12

    @classmethod
    def derive_exponents(cls, N: int, p: Number) -> ExponentSet:
        """
        Derive every index for the equation i u_t + Lap u + |u|^{p-1} u = 0.

        Args:
            N: Spatial dimension
            p: Nonlinearity power

        Returns:
            ExponentSet with exact rational entries

        Raises:
            ValidationError: If N is not a positive integer
            PowerOutOfRange: If p - 1 is not in (4/N, 4/(N-2))
        """
        if isinstance(N, bool) or int(N) != N or N < 1:
            raise ValidationError(f"Dimension must be a positive integer, got {N}")
        N = int(N)
        try:
            p = as_fraction(p)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"Cannot read power p={p!r} as a number")

        alpha = p - 1
        lower = Fraction(4, N)
        if alpha <= lower or (N >= 3 and alpha >= Fraction(4, N - 2)):
            upper = "inf" if N <= 2 else str(Fraction(4, N - 2))
            raise PowerOutOfRange(
                f"p - 1 = {alpha} must lie strictly between {lower} and {upper} for N = {N}"
            )

        return ExponentSet(
            N=N,
            p=p,
            sigma=(4 - (N - 2) * alpha) / (N * alpha - 4),
            s_c=Fraction(N, 2) - 2 / alpha,
            a=2 * alpha * (alpha + 2) / (4 - (N - 2) * alpha),
            b=2 * alpha * (alpha + 2) / (N * alpha * alpha + (N - 2) * alpha - 4),
            gamma=Fraction(2 * (N + 2), N),
            q=4 * (alpha + 2) / (N * alpha),
            r=alpha + 2,
            lam=N * alpha / (2 * (alpha + 2)),
        )

    @classmethod
    def gn_functional(cls, x: float, c_gn: float, exps: ExponentSet) -> float:
        """
        f(x) = x^2/2 - C_GN x^{N(p-1)/2} / (p+1).

        E M^sigma >= f(|grad u||u|^sigma) for every u, with equality for Q.
        """
        return 0.5 * x * x - c_gn * x ** float(exps.grad_power) / float(exps.r)

    @classmethod
    def gn_maximizer(cls, c_gn: float, exps: ExponentSet) -> float:
        """Unique critical point x_1 of f on (0, inf)."""
        base = c_gn * float(exps.grad_power) / float(exps.r)
        return base ** (-2.0 / float(exps.supercritical_gap))

    @classmethod
    def gn_peak_value(cls, x1: float, exps: ExponentSet) -> float:
        """f(x_1) = ((N(p-1)-4)/(2N(p-1))) x_1^2."""
        return float(exps.supercritical_gap / (2 * exps.N * exps.alpha)) * x1 * x1

    @classmethod
    def grad_product(cls, stats: FieldStats, exps: ExponentSet) -> float:
        """|grad u|_{L^2} |u|_{L^2}^sigma."""
        return math.sqrt(stats.grad2) * stats.mass ** (float(exps.sigma) / 2.0)

    @classmethod
    def omega(cls, stats: FieldStats, thresholds: QNorms, exps: ExponentSet) -> float:
        """E M^sigma normalized by its ground-state value."""
        return stats.energy * stats.mass ** float(exps.sigma) / thresholds.thr_energy

    @classmethod
    def well_membership(
        cls,
        stats: FieldStats,
        thresholds: QNorms,
        exps: ExponentSet,
        tolerance: float | None = None,
    ) -> WellStatus:
        """
        Locate a field relative to the potential well.

        Args:
            stats: Field statistics
            thresholds: Ground-state norms
            exps: Exponent set
            tolerance: Boundary band (defaults to BOUNDARY_TOLERANCE)

        Returns:
            WellStatus; InsideWell only when both ratios are below 1 - tolerance
        """
        band = cls.BOUNDARY_TOLERANCE if tolerance is None else tolerance
        omega = cls.omega(stats, thresholds, exps)
        grad_ratio = cls.grad_product(stats, exps) / thresholds.thr_grad

        if omega > 1.0 + band:
            verdict = WellVerdict.ABOVE_ENERGY_THRESHOLD
        elif abs(omega - 1.0) <= band or abs(grad_ratio - 1.0) <= band:
            verdict = WellVerdict.BOUNDARY
        elif grad_ratio < 1.0:
            verdict = WellVerdict.INSIDE_WELL
        else:
            verdict = WellVerdict.OUTSIDE_WELL_ABOVE_GRADIENT

        return WellStatus(omega=omega, grad_ratio=grad_ratio, verdict=verdict)

    @classmethod
    def energy_bounds(
        cls,
        stats: FieldStats,
        thresholds: QNorms,
        exps: ExponentSet,
        tolerance: float | None = None,
    ) -> EnergyBoundReport:
        """
        Evaluate the three energy inequalities valid below the gradient threshold.

        Args:
            stats: Field statistics
            thresholds: Ground-state norms
            exps: Exponent set
            tolerance: Relative slack for equality cases

        Returns:
            EnergyBoundReport with (lhs, rhs, satisfied) per inequality

        Raises:
            PreconditionViolated: If |grad u||u|^sigma exceeds the ground-state value
        """
        band = cls.BOUNDARY_TOLERANCE if tolerance is None else tolerance
        product = cls.grad_product(stats, exps)
        if product > thresholds.thr_grad * (1.0 + band):
            raise PreconditionViolated(
                f"Gradient product {product:.6g} exceeds the ground-state value "
                f"{thresholds.thr_grad:.6g}; the energy bounds are not claimed there"
            )

        omega = max(cls.omega(stats, thresholds, exps), 0.0)
        gap = float(exps.supercritical_gap)
        n_alpha = float(exps.N * exps.alpha)

        energy_rhs = gap / (2.0 * n_alpha) * stats.grad2
        energy_lower = BoundCheck(
            name="energyLower",
            lhs=stats.energy,
            rhs=energy_rhs,
            satisfied=stats.energy >= energy_rhs - band * max(abs(stats.energy), energy_rhs),
        )

        gradient_rhs = math.sqrt(omega) * thresholds.thr_grad
        gradient_upper = BoundCheck(
            name="gradientUpper",
            lhs=product,
            rhs=gradient_rhs,
            satisfied=product <= gradient_rhs + band * max(product, gradient_rhs),
        )

        virial = cls.virial_functional(stats, exps)
        virial_rhs = 8.0 * (1.0 - omega ** (gap / 4.0)) * stats.grad2
        virial_lower = BoundCheck(
            name="virialLower",
            lhs=virial,
            rhs=virial_rhs,
            satisfied=virial >= virial_rhs - band * 8.0 * stats.grad2,
        )

        return EnergyBoundReport(
            energy_lower=energy_lower,
            gradient_upper=gradient_upper,
            virial_lower=virial_lower,
        )

    @classmethod
    def virial_functional(cls, stats: FieldStats, exps: ExponentSet) -> float:
        """R(u) = 8|grad u|^2 - 4N(p-1)/(p+1) |u|_{p+1}^{p+1}."""
        return 8.0 * stats.grad2 - 4.0 * float(exps.N * exps.alpha / exps.r) * stats.pot

    @classmethod
    def coercivity_constant(cls, omega: float, exps: ExponentSet) -> float:
        """eta = 8 (1 - omega^{(N(p-1)-4)/4}) for data in K_omega."""
        return 8.0 * (1.0 - max(omega, 0.0) ** (float(exps.supercritical_gap) / 4.0))

    @classmethod
    def critical_norm_bound(cls, status: WellStatus, thresholds: QNorms) -> float:
        """
        Bound on |u|_{H^{s_c}}^{1+sigma} for u in K_omega.

        Combines the gradient bound with the interpolation inequality
        |u|_{H^{s_c}}^{1+sigma} <= |grad u||u|^sigma.
        """
        return math.sqrt(max(status.omega, 0.0)) * thresholds.thr_grad

    @classmethod
    def carries_momentum(cls, stats: FieldStats) -> bool:
        scale = math.sqrt(stats.mass * stats.grad2)
        return scale > 0.0 and math.sqrt(stats.momentum_norm2) > cls.MOMENTUM_TOLERANCE * scale

    @classmethod
    def galilean_reduce(cls, stats: FieldStats, exps: ExponentSet) -> FieldStats:
        """
        Statistics of the boosted field e^{-i x.P/M} u.

        Mass and potential are unchanged, the momentum vanishes and
        |grad u|^2 drops by |P|^2/M.

        Raises:
            ZeroMass: For the zero field
        """
        if stats.mass == 0.0:
            raise ZeroMass("Galilean boost is undefined for a field of zero mass")
        return FieldStats.from_norms(
            mass=stats.mass,
            grad2=stats.grad2 - stats.momentum_norm2 / stats.mass,
            pot=stats.pot,
            p=float(exps.p),
            momentum=(0.0,) * len(stats.momentum),
        )

    @classmethod
    def scaling_transform(cls, stats: FieldStats, lam: float, exps: ExponentSet) -> FieldStats:
        """
        Statistics of u_lam(x) = lam^{2/(p-1)} u(lam x).

        Args:
            stats: Statistics of u
            lam: Dilation factor
            exps: Exponent set

        Returns:
            Statistics of u_lam

        Raises:
            ValidationError: If lam is not positive
        """
        if lam <= 0:
            raise ValidationError(f"Scaling factor must be positive, got {lam}")
        mass_exp, grad_exp = cls._dilation_exponents(exps)
        momentum_exp = mass_exp + 1.0
        return FieldStats.from_norms(
            mass=stats.mass * lam ** mass_exp,
            grad2=stats.grad2 * lam ** grad_exp,
            pot=stats.pot * lam ** grad_exp,
            p=float(exps.p),
            momentum=tuple(m * lam ** momentum_exp for m in stats.momentum),
        )

    @classmethod
    def amplitude_transform(cls, stats: FieldStats, lam: float, exps: ExponentSet) -> FieldStats:
        """
        Statistics of the amplitude-scaled field lam * u.

        Raises:
            ValidationError: If lam is negative
        """
        if lam < 0:
            raise ValidationError(f"Amplitude factor must be nonnegative, got {lam}")
        return FieldStats.from_norms(
            mass=stats.mass * lam ** 2,
            grad2=stats.grad2 * lam ** 2,
            pot=stats.pot * lam ** float(exps.r),
            p=float(exps.p),
            momentum=tuple(m * lam ** 2 for m in stats.momentum),
        )

    @classmethod
    def hs_scaling_exponent(cls, exps: ExponentSet) -> Fraction:
        """lam-exponent of grad2^{s_c} mass^{1-s_c} under the dilation; exactly 0."""
        mass_exp = 4 / exps.alpha - exps.N
        grad_exp = 2 + mass_exp
        return exps.s_c * grad_exp + (1 - exps.s_c) * mass_exp

    @classmethod
    def _dilation_exponents(cls, exps: ExponentSet) -> Tuple[float, float]:
        mass_exp = 4 / exps.alpha - exps.N
        return float(mass_exp), float(2 + mass_exp)
