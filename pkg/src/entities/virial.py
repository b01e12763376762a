"""
Localized virial weights and per-time virial samples.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.entities.grid import GridSpec


@dataclass(frozen=True, eq=False)
class VirialWeights:
    """
    Radial weights chi_R = R^2 chi(r/R) and theta_R = theta(r/R) sampled on a grid.

    Attributes:
        R: Localization radius
        grid: Grid the weights are sampled on
        chi: chi_R
        chi_prime: chi_R'
        chi_prime_over_r: chi_R'/r (analytic limit 2 inside r <= R)
        chi_second: chi_R''
        lap_chi: Laplacian of chi_R
        bilap_chi: Bi-Laplacian of chi_R
        theta: theta_R
        theta_prime: theta_R'
        chi_prime_bound: sup |chi'| of the unit profile, so |chi_R'| <= bound * R
    """
    R: float
    grid: GridSpec
    chi: np.ndarray
    chi_prime: np.ndarray
    chi_prime_over_r: np.ndarray
    chi_second: np.ndarray
    lap_chi: np.ndarray
    bilap_chi: np.ndarray
    theta: np.ndarray
    theta_prime: np.ndarray
    chi_prime_bound: float

    @property
    def outer(self) -> np.ndarray:
        """Indicator of r > R."""
        return self.grid.radius > self.R


@dataclass(frozen=True)
class VirialSample:
    """
    Localized center of mass and variance with their time derivatives.

    Attributes:
        t: Time
        zR: Truncated center of mass, one entry per axis
        zR_prime: Its time derivative (momentum term included)
        ZR: Localized variance
        ZR_prime: First time derivative of ZR
        ZR_second: Second time derivative of ZR (full local virial identity)
        R_functional: 8|grad u|^2 - 4N(p-1)/(p+1) |u|_{p+1}^{p+1}
        outer_h1: Integral of |grad u|^2 + |u|^2 over r > R
    """
    t: float
    zR: Tuple[float, ...]
    zR_prime: Tuple[float, ...]
    ZR: float
    ZR_prime: float
    ZR_second: float
    R_functional: float
    outer_h1: float

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "t": self.t,
            "zR": list(self.zR),
            "zRPrime": list(self.zR_prime),
            "ZR": self.ZR,
            "ZRPrime": self.ZR_prime,
            "ZRSecond": self.ZR_second,
            "RFunctional": self.R_functional,
            "outerH1": self.outer_h1,
        }
