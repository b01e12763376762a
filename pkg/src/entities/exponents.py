"""
Exponent set entity holding every index derived from (N, p).
"""
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, float, str, Fraction]


def as_fraction(value: Number) -> Fraction:
    """
    Convert a user-supplied number to an exact rational.

    Floats go through their shortest decimal representation, so ``7.0``
    becomes ``7`` and ``0.1`` becomes ``1/10``.

    Args:
        value: Integer, float, decimal string or Fraction

    Returns:
        The value as a Fraction
    """
    if isinstance(value, bool):
        raise ValueError("Booleans are not valid exponents")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def conjugate(x: Fraction) -> Fraction:
    """Hölder conjugate x' = x/(x-1)."""
    return x / (x - 1)


@dataclass(frozen=True)
class ExponentSet:
    """
    Derived indices of the focusing NLS with power nonlinearity.

    All indices are exact rationals; call ``float()`` on them for numerics.

    Attributes:
        N: Spatial dimension
        p: Nonlinearity power (the equation reads |u|^{p-1}u)
        sigma: Scale-balancing exponent making E M^sigma invariant
        s_c: Critical Sobolev index N/2 - 2/(p-1)
        a: Time exponent of the scattering norm L^a_t L^r_x
        b: Time exponent of the dual forcing norm
        gamma: Strichartz-diagonal exponent 2(N+2)/N
        q: Time exponent paired with r
        r: Space exponent p + 1
        lam: Fractional order N(p-1)/(2(p+1)) of the cutoff estimate
    """
    N: int
    p: Fraction
    sigma: Fraction
    s_c: Fraction
    a: Fraction
    b: Fraction
    gamma: Fraction
    q: Fraction
    r: Fraction
    lam: Fraction

    def __post_init__(self):
        """Validate the structural invariants."""
        if self.N < 1:
            raise ValueError(f"Dimension must be at least 1, got {self.N}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0 < self.s_c < min(1, Fraction(self.N, 2)):
            raise ValueError(f"s_c must lie in (0, min(1, N/2)), got {self.s_c}")
        if self.r != self.p + 1:
            raise ValueError("r must equal p + 1")

    @property
    def alpha(self) -> Fraction:
        """The exponent p - 1 of |u| in the nonlinearity."""
        return self.p - 1

    @property
    def grad_power(self) -> Fraction:
        """Power N(p-1)/2 of the gradient norm in the GN inequality."""
        return self.N * self.alpha / 2

    @property
    def mass_power(self) -> Fraction:
        """Power (4-(N-2)(p-1))/2 of the L^2 norm in the GN inequality."""
        return (4 - (self.N - 2) * self.alpha) / 2

    @property
    def supercritical_gap(self) -> Fraction:
        """N(p-1) - 4, positive in the mass-supercritical range."""
        return self.N * self.alpha - 4

    def to_dict(self) -> dict:
        """Convert to dictionary representation with exact rationals as strings."""
        return {
            "N": self.N,
            "p": str(self.p),
            "sigma": str(self.sigma),
            "sCritical": str(self.s_c),
            "a": str(self.a),
            "b": str(self.b),
            "gamma": str(self.gamma),
            "q": str(self.q),
            "r": str(self.r),
            "lambdaCutoff": str(self.lam),
        }
