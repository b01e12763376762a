"""
Periodic grid, field state and frequency cutoff entities.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple

import numpy as np
import scipy.fft


@dataclass(frozen=True)
class GridSpec:
    """
    Uniform periodic box [-L, L)^N sampled with ``points`` nodes per axis.

    Attributes:
        N: Dimension (1 to 3)
        extent: Box half-width L
        points: Samples per axis (power of two)
    """
    N: int
    extent: float
    points: int

    def __post_init__(self):
        """Validate grid parameters."""
        if not 1 <= self.N <= 3:
            raise ValueError(f"Grid dimension must be 1, 2 or 3, got {self.N}")
        if self.extent <= 0:
            raise ValueError(f"Extent must be positive, got {self.extent}")
        if self.points < 8 or self.points & (self.points - 1):
            raise ValueError(f"Points must be a power of two >= 8, got {self.points}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.N

    @property
    def volume(self) -> float:
        return (2.0 * self.extent) ** self.N

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points,) * self.N

    @property
    def k_max(self) -> float:
        """Largest resolved wavenumber pi/dx."""
        return np.pi / self.spacing

    @cached_property
    def axis(self) -> np.ndarray:
        """Node coordinates along one axis; x = 0 is node points/2."""
        return -self.extent + self.spacing * np.arange(self.points)

    @cached_property
    def coordinates(self) -> List[np.ndarray]:
        """Broadcastable coordinate arrays, one per axis."""
        return list(np.meshgrid(*([self.axis] * self.N), indexing="ij", sparse=True))

    @cached_property
    def radius(self) -> np.ndarray:
        """|x| on every node."""
        return np.sqrt(sum(x * x for x in self.coordinates))

    @cached_property
    def wavenumber_axis(self) -> np.ndarray:
        """DFT lattice along one axis, in multiples of pi/L."""
        return 2.0 * np.pi * scipy.fft.fftfreq(self.points, d=self.spacing)

    @cached_property
    def wavevectors(self) -> List[np.ndarray]:
        """Broadcastable wavevector components."""
        return list(np.meshgrid(*([self.wavenumber_axis] * self.N), indexing="ij", sparse=True))

    @cached_property
    def derivative_wavevectors(self) -> List[np.ndarray]:
        """Wavevector components with the Nyquist mode zeroed, for odd derivatives."""
        k = self.wavenumber_axis.copy()
        k[self.points // 2] = 0.0
        return list(np.meshgrid(*([k] * self.N), indexing="ij", sparse=True))

    @cached_property
    def k2(self) -> np.ndarray:
        """|xi|^2 on the full lattice (Nyquist included)."""
        return sum(k * k for k in self.wavevectors) * np.ones(self.shape)

    @cached_property
    def k_abs(self) -> np.ndarray:
        return np.sqrt(self.k2)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {"N": self.N, "extent": self.extent, "points": self.points}


@dataclass
class FieldState:
    """
    Complex field u(t, .) sampled on a periodic grid.

    Attributes:
        grid: The sampling grid
        values: Complex samples, shape (points,)*N
        time: Current time t
    """
    grid: GridSpec
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        """Validate shape and finiteness of the samples."""
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"Field shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Field samples must be finite")

    @classmethod
    def zeros(cls, grid: GridSpec, time: float = 0.0) -> "FieldState":
        return cls(grid=grid, values=np.zeros(grid.shape, dtype=np.complex128), time=time)

    def replace(self, values: np.ndarray, time: float | None = None) -> "FieldState":
        """Return a new state on the same grid."""
        return FieldState(
            grid=self.grid,
            values=values,
            time=self.time if time is None else time,
        )

    def copy(self) -> "FieldState":
        return FieldState(grid=self.grid, values=self.values.copy(), time=self.time)


@dataclass(frozen=True)
class CutoffProfile:
    """
    Smooth radial Fourier multiplier zeta(|xi|/r).

    zeta equals 1 on [0, 1], 0 on [2, inf) and
    e^{-1/(2-rho)} / (e^{-1/(2-rho)} + e^{-1/(rho-1)}) in between.

    Attributes:
        r: Cutoff scale
    """
    r: float

    def __post_init__(self):
        """Validate cutoff scale."""
        if self.r <= 0:
            raise ValueError(f"Cutoff scale must be positive, got {self.r}")

    @staticmethod
    def zeta(rho: np.ndarray) -> np.ndarray:
        """Evaluate the unit-scale bump zeta at radii rho."""
        rho = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho)
        out[rho <= 1.0] = 1.0
        band = (rho > 1.0) & (rho < 2.0)
        mid = rho[band]
        upper = np.exp(-1.0 / (2.0 - mid))
        lower = np.exp(-1.0 / (mid - 1.0))
        out[band] = upper / (upper + lower)
        return out

    def multiplier(self, k_abs: np.ndarray) -> np.ndarray:
        """Multiplier zeta(|xi|/r) on a frequency array."""
        return self.zeta(np.asarray(k_abs) / self.r)
