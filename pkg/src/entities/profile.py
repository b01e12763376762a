"""
Ground-state profile entities: sampled radial solution and its norms.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class ShootingOptions:
    """
    Options for the radial shooting solver.

    Attributes:
        r_max: Truncation radius
        mesh_points: Number of output mesh nodes on [0, r_max] (odd for Simpson)
        tolerance: Relative bracket width on Q(0) at which bisection stops
        max_iterations: Bisection iteration cap
        decay_floor: Largest admissible |Q(r_max)| relative to Q(0)
        rtol: Relative tolerance of the ODE integrator
        atol: Absolute tolerance of the ODE integrator
        method: scipy.integrate.solve_ivp method name
    """
    r_max: float = 20.0
    mesh_points: int = 4001
    tolerance: float = 1e-15
    max_iterations: int = 200
    decay_floor: float = 1e-4
    rtol: float = 1e-13
    atol: float = 1e-15
    method: str = "DOP853"

    def __post_init__(self):
        """Validate option ranges."""
        if self.r_max <= 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        if self.mesh_points < 5:
            raise ValueError(f"mesh_points must be at least 5, got {self.mesh_points}")
        if not 0 < self.tolerance < 1:
            raise ValueError(f"tolerance must lie in (0, 1), got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """
    Sampled radial ground state Q of -Q'' - (N-1)/r Q' + Q = Q^p.

    Attributes:
        N: Spatial dimension
        p: Nonlinearity power
        r_max: Radius of the last mesh node (may be below the requested
            truncation radius when the shot had to be cut early)
        r: Mesh nodes, starting at 0
        q: Q sampled on the mesh
        dq: Q' sampled on the mesh
        q0: Shooting value Q(0)
        converged: Whether the bisection bracket met its tolerance
        tolerance: Bracket tolerance the profile was solved with
    """
    N: int
    p: Fraction
    r_max: float
    r: np.ndarray
    q: np.ndarray
    dq: np.ndarray
    q0: float
    converged: bool
    tolerance: float

    def __post_init__(self):
        """Validate mesh consistency."""
        if not (len(self.r) == len(self.q) == len(self.dq)):
            raise ValueError("Profile arrays must have equal length")
        if self.r[0] != 0.0:
            raise ValueError("Profile mesh must start at r = 0")

    @property
    def key(self) -> tuple:
        """Cache key (N, p, tolerance)."""
        return (self.N, self.p, self.tolerance)

    def to_dict(self) -> dict:
        """Convert scalar metadata to dictionary representation."""
        return {
            "N": self.N,
            "p": str(self.p),
            "rMax": self.r_max,
            "meshPoints": int(len(self.r)),
            "q0": self.q0,
            "converged": self.converged,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class QNorms:
    """
    Integral norms of the ground state and the derived well thresholds.

    Attributes:
        mass: |Q|^2 in L^2
        grad2: |grad Q|^2 in L^2
        pot: |Q|^{p+1} in L^{p+1}
        energy: E(Q)
        c_gn: Sharp Gagliardo-Nirenberg constant (quotient form)
        thr_energy: E(Q) M(Q)^sigma
        thr_grad: |grad Q| |Q|^sigma
    """
    mass: float
    grad2: float
    pot: float
    energy: float
    c_gn: float
    thr_energy: float
    thr_grad: float

    def __post_init__(self):
        """Validate positivity of the ground-state energy."""
        if self.energy <= 0:
            raise ValueError(f"Ground-state energy must be positive, got {self.energy}")

    def with_mass_factor(self, factor: float) -> "QNorms":
        """Return a copy whose mass is multiplied by ``factor``, the rest untouched."""
        return QNorms(
            mass=self.mass * factor,
            grad2=self.grad2,
            pot=self.pot,
            energy=self.energy,
            c_gn=self.c_gn,
            thr_energy=self.thr_energy,
            thr_grad=self.thr_grad,
        )

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "mass": self.mass,
            "grad2": self.grad2,
            "pot": self.pot,
            "energy": self.energy,
            "cGn": self.c_gn,
            "thrEnergy": self.thr_energy,
            "thrGrad": self.thr_grad,
        }
