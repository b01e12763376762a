"""
Gronwall-type inequality with mixed Lebesgue norms: bound, partition and instance checks.
"""
from dataclasses import dataclass
import logging
import math
from typing import Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.optimize import brentq
from scipy.special import gamma as gamma_fn

from src.core.exceptions import HypothesisFails, ValidationError
from src.entities.gronwall import GronwallInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionReport:
    """
    Breakpoints 0 = tau_0 < ... < tau_l = T with |f|_{L^rho} = 1/2 on every interior piece.

    Attributes:
        breakpoints: tau_0 .. tau_l
        piece_norms: |f|_{L^rho(tau_{k-1}, tau_k)} per piece
        total_norm: |f|_{L^rho(0, T)}
        count_bound: (2 |f|_{L^rho(0,T)})^rho + 1
    """
    breakpoints: Tuple[float, ...]
    piece_norms: Tuple[float, ...]
    total_norm: float
    count_bound: float

    @property
    def pieces(self) -> int:
        return len(self.breakpoints) - 1


@dataclass(frozen=True)
class GronwallReport:
    """
    Hypothesis and conclusion of the inequality along the sample grid.

    Attributes:
        t: Sample times
        lhs: |phi|_{L^gamma(0,t)}
        hypothesis_rhs: eta + |f phi|_{L^beta(0,t)}
        conclusion_rhs: eta * Phi(|f|_{L^rho(0,t)})
        hypothesis_margin: min over t of hypothesis_rhs - lhs
        conclusion_margin: min over t of conclusion_rhs - lhs
    """
    t: np.ndarray
    lhs: np.ndarray
    hypothesis_rhs: np.ndarray
    conclusion_rhs: np.ndarray
    hypothesis_margin: float
    conclusion_margin: float

    @property
    def holds(self) -> bool:
        return self.conclusion_margin >= -GronwallVerifier.TOLERANCE * max(
            float(np.max(self.conclusion_rhs)), 1.0
        )

    @property
    def worst_ratio(self) -> float:
        """Largest lhs / conclusion_rhs over the grid (0 where both vanish)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(self.conclusion_rhs > 0, self.lhs / self.conclusion_rhs, 0.0)
        return float(np.max(ratio))

    def to_dict(self) -> dict:
        """Convert summary to dictionary representation."""
        return {
            "hypothesisMargin": self.hypothesis_margin,
            "conclusionMargin": self.conclusion_margin,
            "worstRatio": self.worst_ratio,
            "holds": self.holds,
        }


class GronwallVerifier:
    """
    |phi|_{L^gamma(0,t)} <= eta + |f phi|_{L^beta(0,t)} for all t implies
    |phi|_{L^gamma(0,t)} <= eta Phi(|f|_{L^rho(0,t)}) with Phi(s) = 2 Gamma(3 + 2s).

    Sampled norms use composite Simpson on the instance grid.
    """

    # Relative slack for equality on the sampled grid
    TOLERANCE = 1e-12
    PIECE_NORM = 0.5

    @classmethod
    def phi_big(cls, s: float) -> float:
        """
        Phi(s) = 2 Gamma(3 + 2s).

        Raises:
            ValidationError: If s is negative
        """
        if s < 0:
            raise ValidationError(f"Phi is defined for s >= 0, got {s}")
        return 2.0 * float(gamma_fn(3.0 + 2.0 * s))

    @classmethod
    def running_norm(cls, t: np.ndarray, g: np.ndarray, q: float) -> np.ndarray:
        """|g|_{L^q(0, t_i)} for every sample time (running maximum for q = inf)."""
        g = np.abs(np.asarray(g, dtype=float))
        if math.isinf(q):
            return np.maximum.accumulate(g)
        return cls.running_power(t, g, q) ** (1.0 / q)

    @classmethod
    def running_power(cls, t: np.ndarray, g: np.ndarray, q: float) -> np.ndarray:
        """Monotone cumulative integral of |g|^q."""
        integral = cumulative_simpson(np.abs(g) ** q, x=t, initial=0.0)
        return np.maximum.accumulate(np.maximum(integral, 0.0))

    @classmethod
    def partition(cls, t: Sequence[float], f: Sequence[float], rho: float) -> PartitionReport:
        """
        Split [0, T] into pieces carrying L^rho norm 1/2 each (the last one at most 1/2).

        Args:
            t: Sample times starting at 0
            f: Nonnegative samples of f
            rho: Exponent >= 1

        Returns:
            PartitionReport
        """
        if rho < 1:
            raise ValidationError(f"rho must be at least 1, got {rho}")
        t = np.asarray(t, dtype=float)
        cumulative = cls.running_power(t, np.asarray(f, dtype=float), rho)
        total = float(cumulative[-1])
        piece = cls.PIECE_NORM ** rho

        breakpoints = [float(t[0])]
        level = piece
        while level < total * (1.0 - cls.TOLERANCE):
            index = int(np.searchsorted(cumulative, level, side="left"))
            left, right = t[index - 1], t[index]
            tau = brentq(lambda s: np.interp(s, t, cumulative) - level, left, right, xtol=1e-14)
            breakpoints.append(float(tau))
            level += piece
        breakpoints.append(float(t[-1]))

        values = np.interp(breakpoints, t, cumulative)
        values[-1] = total
        pieces = np.maximum(np.diff(values), 0.0) ** (1.0 / rho)
        norm = total ** (1.0 / rho)
        logger.debug("Partitioned [0, %g] into %d pieces (|f|=%.6g)", t[-1], len(pieces), norm)

        return PartitionReport(
            breakpoints=tuple(breakpoints),
            piece_norms=tuple(float(x) for x in pieces),
            total_norm=norm,
            count_bound=(2.0 * norm) ** rho + 1.0,
        )

    @classmethod
    def verify_instance(cls, inst: GronwallInstance) -> GronwallReport:
        """
        Check the hypothesis on the sample grid, then the conclusion.

        Raises:
            HypothesisFails: If the hypothesis is violated at some sample time
        """
        lhs = cls.running_norm(inst.t, inst.phi, inst.gamma)
        hypothesis = inst.eta + cls.running_norm(inst.t, inst.f * inst.phi, inst.beta)
        slack = cls.TOLERANCE * np.maximum(hypothesis, 1.0)
        violations = np.flatnonzero(lhs > hypothesis + slack)
        if violations.size:
            first = int(violations[0])
            raise HypothesisFails(
                f"Hypothesis fails at t={inst.t[first]:.6g}: "
                f"{lhs[first]:.6g} > {hypothesis[first]:.6g}"
            )

        f_norm = cls.running_norm(inst.t, inst.f, inst.rho)
        conclusion = inst.eta * 2.0 * gamma_fn(3.0 + 2.0 * f_norm)
        return GronwallReport(
            t=inst.t,
            lhs=lhs,
            hypothesis_rhs=hypothesis,
            conclusion_rhs=conclusion,
            hypothesis_margin=float(np.min(hypothesis - lhs)),
            conclusion_margin=float(np.min(conclusion - lhs)),
        )

    @classmethod
    def sample_instance(
        cls,
        rng: np.random.Generator,
        beta: float,
        gamma: float,
        T: float = 1.0,
        n: int = 401,
    ) -> GronwallInstance:
        """
        Random smooth (f, phi) with eta the smallest value making the hypothesis hold.

        eta = max over the grid of |phi|_{L^gamma(0,t)} - |f phi|_{L^beta(0,t)}, clipped at 0.
        """
        t = np.linspace(0.0, T, n)
        f = rng.uniform(0.0, 1.0) * np.ones_like(t)
        for _ in range(3):
            amplitude = rng.uniform(0.0, 1.0)
            frequency = rng.uniform(0.5, 8.0)
            shift = rng.uniform(0.0, 2.0 * np.pi)
            f = f + amplitude * 0.5 * (1.0 + np.sin(frequency * t / T + shift))
        growth = rng.uniform(-1.0, 2.0)
        ripple = rng.uniform(0.0, 0.5)
        wobble = np.sin(rng.uniform(1.0, 10.0) * t / T)
        phi = rng.uniform(0.1, 2.0) * np.exp(growth * t / T) * (1.0 + ripple * wobble)

        lhs = cls.running_norm(t, phi, gamma)
        rhs = cls.running_norm(t, f * phi, beta)
        eta = max(float(np.max(lhs - rhs)), 0.0)
        return GronwallInstance(beta=beta, gamma=gamma, T=T, t=t, f=f, phi=phi, eta=eta)
