"""
Radial ground state by shooting on Q(0), with norms and sharp GN constant.
"""
from enum import Enum
import logging
import math
from typing import Tuple

import numpy as np
from scipy.integrate import simpson, solve_ivp
from scipy.special import gamma as gamma_fn

from src.core.exceptions import NoBracketFound, NotConverged
from src.entities.exponents import ExponentSet
from src.entities.profile import QNorms, RadialProfile, ShootingOptions
from src.entities.stats import FieldStats

logger = logging.getLogger(__name__)


class ShotOutcome(str, Enum):
    """Fate of a single radial shot."""
    CROSSES_ZERO = "crosses"
    TURNS_BACK = "turns"
    REACHES_END = "reaches_end"


def _radial_rhs(r, y, N, p):
    q, dq = y
    return [dq, -(N - 1) / r * dq + q - abs(q) ** (p - 1) * q]


def _crossing(r, y, N, p):
    return y[0]


_crossing.terminal = True
_crossing.direction = -1


def _turning(r, y, N, p):
    return y[1]


_turning.terminal = True
_turning.direction = 1


class GroundStateSolver:
    """
    Shooting solver for Q'' + (N-1)/r Q' - Q + Q^p = 0, Q'(0) = 0, Q -> 0.

    Too large a Q(0) makes the shot cross zero, too small a Q(0) makes it
    turn back up; bisection on Q(0) converges to the decaying ground state.
    The profile is the mean of the two bracketing shots, cut where they
    separate by more than DIVERGENCE_TOL.
    """

    # Series start radius near the origin
    START_RADIUS = 1e-5
    # Lower bracket: Q = 1 is the constant equilibrium, anything just above turns back
    LOWER_BRACKET = 1.0 + 1e-6
    MAX_BRACKET_DOUBLINGS = 60
    # Absolute separation of the bracketing shots at which the profile is cut
    DIVERGENCE_TOL = 1e-10
    SEPARATION_POINTS = 20001

    @classmethod
    def surface_area(cls, N: int) -> float:
        """|S^{N-1}| = 2 pi^{N/2} / Gamma(N/2) (equals 2 for N = 1)."""
        return 2.0 * math.pi ** (N / 2.0) / float(gamma_fn(N / 2.0))

    @classmethod
    def solve(cls, exps: ExponentSet, opts: ShootingOptions | None = None) -> RadialProfile:
        """
        Solve for the radial ground state.

        Args:
            exps: Exponent set of an admissible (N, p)
            opts: Shooting options

        Returns:
            Converged RadialProfile

        Raises:
            NoBracketFound: If no initial bracket separates the two behaviours
            NotConverged: If bisection hits its iteration cap or the tail
                does not decay below the floor
        """
        opts = opts or ShootingOptions()
        N, p = exps.N, float(exps.p)

        lo, hi = cls._initial_bracket(N, p, opts)
        logger.debug("Shooting bracket for N=%d p=%s: [%.6g, %.6g]", N, exps.p, lo, hi)

        converged = False
        for iteration in range(opts.max_iterations):
            if hi - lo <= opts.tolerance * hi:
                converged = True
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                converged = True
                break
            outcome, _ = cls.shoot(mid, N, p, opts)
            if outcome == ShotOutcome.CROSSES_ZERO:
                hi = mid
            elif outcome == ShotOutcome.TURNS_BACK:
                lo = mid
            else:
                lo = hi = mid
                converged = True
                break

        if not converged:
            raise NotConverged(
                f"Shooting for N={N}, p={exps.p} did not converge in "
                f"{opts.max_iterations} iterations (bracket [{lo}, {hi}])"
            )
        logger.info("Ground state N=%d p=%s: Q(0)=%.15g after %d bisections",
                    N, exps.p, 0.5 * (lo + hi), iteration)

        return cls._build_profile(exps, lo, hi, opts)

    @classmethod
    def shoot(
        cls, q0: float, N: int, p: float, opts: ShootingOptions, dense: bool = False
    ) -> Tuple[ShotOutcome, object]:
        """
        Integrate one shot from the series start near r = 0.

        Returns:
            The outcome and the solve_ivp result
        """
        r0 = cls.START_RADIUS
        curvature = (q0 - q0 ** p) / N
        y0 = [q0 + 0.5 * curvature * r0 * r0, curvature * r0]
        sol = solve_ivp(
            _radial_rhs,
            (r0, opts.r_max),
            y0,
            method=opts.method,
            rtol=opts.rtol,
            atol=opts.atol,
            events=(_crossing, _turning),
            args=(N, p),
            dense_output=dense,
        )
        if sol.t_events[0].size:
            return ShotOutcome.CROSSES_ZERO, sol
        if sol.t_events[1].size:
            return ShotOutcome.TURNS_BACK, sol
        return ShotOutcome.REACHES_END, sol

    @classmethod
    def _initial_bracket(cls, N: int, p: float, opts: ShootingOptions) -> Tuple[float, float]:
        lo = cls.LOWER_BRACKET
        outcome, _ = cls.shoot(lo, N, p, opts)
        if outcome != ShotOutcome.TURNS_BACK:
            raise NoBracketFound(
                f"Lower bracket Q(0)={lo} does not turn back (got {outcome.value})"
            )

        # One-dimensional value as a starting guess for the upper end
        hi = 2.0 * ((p + 1.0) / 2.0) ** (1.0 / (p - 1.0))
        for _ in range(cls.MAX_BRACKET_DOUBLINGS):
            outcome, _ = cls.shoot(hi, N, p, opts)
            if outcome == ShotOutcome.CROSSES_ZERO:
                return lo, hi
            lo = hi if outcome == ShotOutcome.TURNS_BACK else lo
            hi *= 2.0
        raise NoBracketFound(f"No Q(0) up to {hi} crosses zero for N={N}, p={p}")

    @classmethod
    def _build_profile(
        cls, exps: ExponentSet, lo: float, hi: float, opts: ShootingOptions
    ) -> RadialProfile:
        N, p = exps.N, float(exps.p)
        _, low_shot = cls.shoot(lo, N, p, opts, dense=True)
        _, high_shot = cls.shoot(hi, N, p, opts, dense=True)
        r_end = min(low_shot.t[-1], high_shot.t[-1])

        mesh = np.linspace(cls.START_RADIUS, r_end, cls.SEPARATION_POINTS)
        separation = np.abs(high_shot.sol(mesh)[0] - low_shot.sol(mesh)[0])
        split = np.flatnonzero(separation > cls.DIVERGENCE_TOL)
        r_cut = mesh[max(split[0] - 1, 1)] if split.size else r_end

        r = np.linspace(0.0, r_cut, opts.mesh_points)
        q = np.empty_like(r)
        dq = np.empty_like(r)
        q0 = 0.5 * (lo + hi)
        near = r < cls.START_RADIUS
        curvature = (q0 - q0 ** p) / N
        q[near] = q0 + 0.5 * curvature * r[near] ** 2
        dq[near] = curvature * r[near]
        far = ~near
        values = 0.5 * (low_shot.sol(r[far]) + high_shot.sol(r[far]))
        q[far], dq[far] = values[0], values[1]

        floor = opts.decay_floor * q0
        if abs(q[-1]) > floor:
            raise NotConverged(
                f"Profile tail Q({r_cut:.3g}) = {q[-1]:.3g} is above the decay floor {floor:.3g}"
            )
        logger.debug("Profile cut at r=%.4g with Q=%.3g", r_cut, q[-1])

        return RadialProfile(
            N=N,
            p=exps.p,
            r_max=float(r_cut),
            r=r,
            q=q,
            dq=dq,
            q0=q0,
            converged=True,
            tolerance=opts.tolerance,
        )

    @classmethod
    def radial_integral(cls, profile: RadialProfile, integrand: np.ndarray) -> float:
        """Integral over R^N of a radial function sampled on the profile mesh."""
        weight = cls.surface_area(profile.N) * profile.r ** (profile.N - 1)
        return float(simpson(integrand * weight, x=profile.r))

    @classmethod
    def profile_stats(cls, profile: RadialProfile) -> FieldStats:
        """Mass, gradient and potential norms of the profile (zero momentum)."""
        p = float(profile.p)
        return FieldStats.from_norms(
            mass=cls.radial_integral(profile, profile.q ** 2),
            grad2=cls.radial_integral(profile, profile.dq ** 2),
            pot=cls.radial_integral(profile, np.abs(profile.q) ** (p + 1.0)),
            p=p,
        )

    @classmethod
    def profile_norms(cls, profile: RadialProfile, exps: ExponentSet) -> QNorms:
        """
        Integral norms and well thresholds of a converged profile.

        Raises:
            NotConverged: If the profile is not flagged converged
        """
        if not profile.converged:
            raise NotConverged("Norms requested for an unconverged profile")
        stats = cls.profile_stats(profile)
        sigma = float(exps.sigma)
        c_direct = cls.gn_quotient(stats, exps)
        return QNorms(
            mass=stats.mass,
            grad2=stats.grad2,
            pot=stats.pot,
            energy=stats.energy,
            c_gn=c_direct,
            thr_energy=stats.energy * stats.mass ** sigma,
            thr_grad=math.sqrt(stats.grad2) * stats.mass ** (sigma / 2.0),
        )

    @classmethod
    def gn_quotient(cls, stats: FieldStats, exps: ExponentSet) -> float:
        """|f|_{p+1}^{p+1} / (|f|_2^{(4-(N-2)(p-1))/2} |grad f|_2^{N(p-1)/2})."""
        denominator = (
            stats.mass ** (float(exps.mass_power) / 2.0)
            * stats.grad2 ** (float(exps.grad_power) / 2.0)
        )
        if denominator == 0.0:
            return 0.0
        return stats.pot / denominator

    @classmethod
    def gn_constant(cls, norms: QNorms, exps: ExponentSet) -> Tuple[float, float]:
        """
        Sharp GN constant from the quotient and from the threshold identity.

        Returns:
            (c_direct, c_identity)
        """
        stats = FieldStats.from_norms(norms.mass, norms.grad2, norms.pot, float(exps.p))
        c_direct = cls.gn_quotient(stats, exps)
        c_identity = (
            float(2 * exps.r / (exps.N * exps.alpha))
            * norms.thr_grad ** (-float(exps.supercritical_gap) / 2.0)
        )
        return c_direct, c_identity

    @classmethod
    def gn_ratio(cls, stats: FieldStats, c_gn: float, exps: ExponentSet) -> float:
        """Left over right side of the GN inequality; at most 1 for every field."""
        return cls.gn_quotient(stats, exps) / c_gn

    @classmethod
    def pohozaev_residuals(cls, norms: QNorms, exps: ExponentSet) -> Tuple[float, float, float]:
        """
        Relative residuals of the three Pohozaev identities.

        M = (4-(N-2)(p-1))/(N(p-1)) |grad Q|^2
          = (4-(N-2)(p-1))/(2(p+1)) |Q|_{p+1}^{p+1}
          = (8-2(N-2)(p-1))/(N(p-1)-4) E(Q)
        """
        N, alpha = exps.N, exps.alpha
        top = 4 - (N - 2) * alpha
        predictions = (
            float(top / (N * alpha)) * norms.grad2,
            float(top / (2 * exps.r)) * norms.pot,
            float(2 * top / exps.supercritical_gap) * norms.energy,
        )
        return tuple(abs(norms.mass - value) / norms.mass for value in predictions)

    @classmethod
    def closed_form_1d(cls, x: np.ndarray, p: float) -> np.ndarray:
        """((p+1)/2)^{1/(p-1)} sech^{2/(p-1)}((p-1)x/2), the one-dimensional ground state."""
        amplitude = ((p + 1.0) / 2.0) ** (1.0 / (p - 1.0))
        return amplitude / np.cosh(0.5 * (p - 1.0) * np.asarray(x)) ** (2.0 / (p - 1.0))
