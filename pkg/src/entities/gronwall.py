"""
Sampled instance of the Gronwall-type inequality.
"""
from dataclasses import dataclass
import math

import numpy as np


@dataclass(frozen=True, eq=False)
class GronwallInstance:
    """
    Data (phi, f, eta) on [0, T] with exponents 1 <= beta < gamma <= inf.

    Attributes:
        beta: Exponent of the hypothesis' right-hand norm
        gamma: Exponent of the controlled norm (math.inf for the supremum)
        T: Horizon
        t: Sample times, t[0] = 0 and t[-1] = T
        f: Nonnegative samples of f
        phi: Nonnegative samples of phi
        eta: Constant eta >= 0
    """
    beta: float
    gamma: float
    T: float
    t: np.ndarray
    f: np.ndarray
    phi: np.ndarray
    eta: float

    def __post_init__(self):
        """Validate exponents and samples."""
        if not 1 <= self.beta < self.gamma:
            raise ValueError(f"Need 1 <= beta < gamma, got beta={self.beta}, gamma={self.gamma}")
        if self.T <= 0:
            raise ValueError(f"Horizon must be positive, got {self.T}")
        if self.eta < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")
        if not (len(self.t) == len(self.f) == len(self.phi)):
            raise ValueError("t, f and phi must have equal length")
        if len(self.t) < 3:
            raise ValueError("At least three samples are required")
        if self.t[0] != 0.0 or not math.isclose(self.t[-1], self.T):
            raise ValueError("Samples must span [0, T]")
        for name in ("f", "phi"):
            values = getattr(self, name)
            if not np.all(np.isfinite(values)) or np.any(values < 0):
                raise ValueError(f"{name} samples must be finite and nonnegative")

    @property
    def rho(self) -> float:
        """Exponent with 1/rho = 1/beta - 1/gamma (rho = beta when gamma is infinite)."""
        if math.isinf(self.gamma):
            return self.beta
        return 1.0 / (1.0 / self.beta - 1.0 / self.gamma)

    def with_eta(self, eta: float) -> "GronwallInstance":
        return GronwallInstance(
            beta=self.beta, gamma=self.gamma, T=self.T,
            t=self.t, f=self.f, phi=self.phi, eta=eta,
        )
