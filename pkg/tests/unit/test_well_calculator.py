"""
Unit tests for exponents and potential-well geometry.
"""
from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from src.core.exceptions import PowerOutOfRange, PreconditionViolated, ValidationError, ZeroMass
from src.entities.exponents import conjugate
from src.entities.grid import GridSpec
from src.entities.stats import FieldStats, WellVerdict
from src.services.spectral import SpectralCalculus
from src.services.well_calculator import WellCalculator
from src.strategies.base import InitialDataRequest
from src.strategies.gaussian import GaussianStrategy


@st.composite
def admissible_cases(draw):
    """(N, p) with p - 1 strictly inside (4/N, 4/(N-2))."""
    N = draw(st.integers(min_value=1, max_value=3))
    den = draw(st.integers(min_value=2, max_value=97))
    lower = Fraction(4, N)
    if N == 3:
        num = draw(st.integers(min_value=1, max_value=den - 1))
        alpha = lower + Fraction(num, den) * (Fraction(4, N - 2) - lower)
    else:
        num = draw(st.integers(min_value=1, max_value=20 * den))
        alpha = lower + Fraction(num, den)
    return N, alpha + 1


def q_stats(norms, exps):
    return FieldStats.from_norms(norms.mass, norms.grad2, norms.pot, float(exps.p))


class TestDeriveExponents:
    """Test suite for the exponent system."""

    def test_reference_values_1d(self):
        """Test exact values for N = 1, p = 7."""
        exps = WellCalculator.derive_exponents(1, 7)

        assert exps.sigma == Fraction(5, 1)
        assert exps.s_c == Fraction(1, 6)
        assert exps.a == Fraction(48, 5)
        assert exps.b == Fraction(48, 13)
        assert exps.gamma == 6
        assert exps.r == 8
        assert exps.lam == Fraction(3, 8)

    def test_three_dimensional_cubic(self):
        """Test the cubic equation in three dimensions."""
        exps = WellCalculator.derive_exponents(3, 3)

        assert exps.sigma == 1
        assert exps.s_c == Fraction(1, 2)

    def test_string_and_float_powers_are_exact(self):
        """Test that '7/3' and 7.0 are read as exact rationals."""
        assert WellCalculator.derive_exponents(2, "7/3").p == Fraction(7, 3)
        assert WellCalculator.derive_exponents(1, 7.0).p == 7

    @pytest.mark.parametrize("N, p", [(1, 5), (2, 3), (3, 5), (3, Fraction(7, 3))])
    def test_power_out_of_range(self, N, p):
        """Test that critical and out-of-range powers are rejected."""
        with pytest.raises(PowerOutOfRange, match="must lie strictly between"):
            WellCalculator.derive_exponents(N, p)

    def test_invalid_dimension(self):
        """Test that a non-integer dimension is rejected."""
        with pytest.raises(ValidationError, match="positive integer"):
            WellCalculator.derive_exponents(0, 3)

    @settings(deadline=None, max_examples=1000)
    @given(admissible_cases())
    def test_identities(self, case):
        """Test p r' = r, p b' = a and sigma = (1 - s_c)/s_c exactly."""
        exps = WellCalculator.derive_exponents(*case)

        assert exps.p * conjugate(exps.r) == exps.r
        assert exps.p * conjugate(exps.b) == exps.a
        assert exps.sigma == (1 - exps.s_c) / exps.s_c
        assert 0 < exps.s_c < 1
        assert WellCalculator.hs_scaling_exponent(exps) == 0


class TestWellMembership:
    """Test suite for well verdicts."""

    def test_ground_state_is_on_the_boundary(self, exps_1d, norms_1d):
        """Test that Q itself sits on the boundary."""
        status = WellCalculator.well_membership(q_stats(norms_1d, exps_1d), norms_1d, exps_1d)

        assert status.verdict == WellVerdict.BOUNDARY
        assert status.omega == pytest.approx(1.0, rel=1e-9)
        assert status.grad_ratio == pytest.approx(1.0, rel=1e-9)

    @pytest.mark.parametrize("lam", [0.5, 0.9, 0.99])
    def test_scaled_below_one_is_inside(self, exps_1d, norms_1d, lam):
        """Test that lam Q with lam < 1 is inside the well."""
        stats = WellCalculator.amplitude_transform(q_stats(norms_1d, exps_1d), lam, exps_1d)
        status = WellCalculator.well_membership(stats, norms_1d, exps_1d)

        assert status.verdict == WellVerdict.INSIDE_WELL
        assert status.grad_ratio == pytest.approx(lam ** (1.0 + float(exps_1d.sigma)), rel=1e-9)

    @pytest.mark.parametrize("lam", [1.01, 1.1, 1.5])
    def test_scaled_above_one_is_outside(self, exps_1d, norms_1d, lam):
        """Test that lam Q with lam > 1 lies above the gradient threshold."""
        stats = WellCalculator.amplitude_transform(q_stats(norms_1d, exps_1d), lam, exps_1d)
        status = WellCalculator.well_membership(stats, norms_1d, exps_1d)

        assert status.verdict == WellVerdict.OUTSIDE_WELL_ABOVE_GRADIENT
        assert status.omega < 1.0

    def test_energy_above_threshold(self, exps_1d, norms_1d):
        """Test that a large energy level is reported first."""
        stats = FieldStats.from_norms(norms_1d.mass, 4.0 * norms_1d.grad2, 0.0, 7.0)
        status = WellCalculator.well_membership(stats, norms_1d, exps_1d)

        assert status.verdict == WellVerdict.ABOVE_ENERGY_THRESHOLD

    def test_boundary_band_on_gradient(self, exps_1d, norms_1d):
        """Test that a gradient ratio within the band is read as boundary."""
        lam = 1.0 - 1e-8
        stats = WellCalculator.amplitude_transform(q_stats(norms_1d, exps_1d), lam, exps_1d)

        status = WellCalculator.well_membership(stats, norms_1d, exps_1d)

        assert status.verdict == WellVerdict.BOUNDARY

    @settings(deadline=None, max_examples=50)
    @given(st.floats(min_value=0.05, max_value=20.0))
    def test_dilation_leaves_ratios_unchanged(self, lam):
        """Test that u -> lam^{2/(p-1)} u(lam x) preserves omega and the gradient ratio."""
        exps = WellCalculator.derive_exponents(1, 7)
        base = FieldStats.from_norms(2.0, 3.0, 1.5, 7.0, momentum=(0.3,))
        scaled = WellCalculator.scaling_transform(base, lam, exps)

        ratio = WellCalculator.grad_product(scaled, exps) / WellCalculator.grad_product(base, exps)
        level = (scaled.energy * scaled.mass ** 5) / (base.energy * base.mass ** 5)

        assert ratio == pytest.approx(1.0, rel=1e-9)
        assert level == pytest.approx(1.0, rel=1e-9)

    def test_scaling_rejects_nonpositive(self, exps_1d):
        """Test that a nonpositive dilation is rejected."""
        stats = FieldStats.from_norms(1.0, 1.0, 1.0, 7.0)
        with pytest.raises(ValidationError, match="must be positive"):
            WellCalculator.scaling_transform(stats, 0.0, exps_1d)


class TestGnGeometry:
    """Test suite for the GN functional f."""

    def test_peak_value_matches_functional(self, exps_1d, norms_1d):
        """Test f(x_1) against its closed form and the ground-state level."""
        x1 = WellCalculator.gn_maximizer(norms_1d.c_gn, exps_1d)

        peak = WellCalculator.gn_functional(x1, norms_1d.c_gn, exps_1d)

        assert peak == pytest.approx(WellCalculator.gn_peak_value(x1, exps_1d), rel=1e-12)
        assert x1 == pytest.approx(norms_1d.thr_grad, rel=1e-6)
        assert peak == pytest.approx(norms_1d.thr_energy, rel=1e-6)


class TestEnergyBounds:
    """Test suite for the energy inequalities below the gradient threshold."""

    @pytest.mark.parametrize("lam", [0.3, 0.7, 0.95])
    def test_inside_well_satisfies_all(self, reference_cases, lam):
        """Test that every inside-well datum satisfies the three bounds."""
        for exps, entry in reference_cases.values():
            stats = WellCalculator.amplitude_transform(q_stats(entry.norms, exps), lam, exps)
            report = WellCalculator.energy_bounds(stats, entry.norms, exps)

            assert report.all_satisfied, report.to_dict()

    def test_precondition(self, exps_1d, norms_1d):
        """Test that the bounds are refused above the gradient threshold."""
        stats = WellCalculator.amplitude_transform(q_stats(norms_1d, exps_1d), 1.2, exps_1d)
        with pytest.raises(PreconditionViolated, match="exceeds the ground-state value"):
            WellCalculator.energy_bounds(stats, norms_1d, exps_1d)

    def test_coercivity_constant(self, exps_1d):
        """Test eta = 8 (1 - omega^{(N(p-1)-4)/4})."""
        assert WellCalculator.coercivity_constant(0.0, exps_1d) == 8.0
        assert WellCalculator.coercivity_constant(1.0, exps_1d) == pytest.approx(0.0)
        assert WellCalculator.coercivity_constant(0.5, exps_1d) == pytest.approx(
            8.0 * (1.0 - 0.5 ** 0.5)
        )


class TestCriticalNormBound:
    """Test suite for the H^{s_c} bound inside the well."""

    @pytest.mark.parametrize("lam", [0.3, 0.7, 0.95])
    def test_bounds_gradient_product(self, reference_cases, lam):
        """Test that the bound dominates |grad u||u|^sigma for lam Q."""
        for exps, entry in reference_cases.values():
            stats = WellCalculator.amplitude_transform(q_stats(entry.norms, exps), lam, exps)
            status = WellCalculator.well_membership(stats, entry.norms, exps)

            bound = WellCalculator.critical_norm_bound(status, entry.norms)

            assert status.inside
            assert WellCalculator.grad_product(stats, exps) < bound

    def test_ground_state_attains_bound(self, exps_1d, norms_1d):
        """Test that Q sits exactly on the bound."""
        stats = q_stats(norms_1d, exps_1d)
        status = WellCalculator.well_membership(stats, norms_1d, exps_1d)

        bound = WellCalculator.critical_norm_bound(status, norms_1d)

        assert bound == pytest.approx(norms_1d.thr_grad, rel=1e-6)

    def test_sampled_field(self, exps_1d, norms_1d):
        """Test the bound on the critical Sobolev norm of a sampled Gaussian."""
        grid = GridSpec(1, 20.0, 1024)
        request = InitialDataRequest(family="gaussian", amplitude=0.5, width=1.0)
        field = GaussianStrategy().sample(grid, exps_1d, request)
        stats = SpectralCalculus.field_stats(field, float(exps_1d.p))
        status = WellCalculator.well_membership(stats, norms_1d, exps_1d)

        critical = SpectralCalculus.sobolev_norm(field, float(exps_1d.s_c))
        bound = WellCalculator.critical_norm_bound(status, norms_1d)

        assert status.inside
        assert critical ** float(1 + exps_1d.sigma) <= bound


class TestGalileanReduction:
    """Test suite for the statistics of the boosted field."""

    def test_kick_is_removed(self, exps_1d):
        """Test that reducing a kicked Gaussian gives the resting one."""
        strategy = GaussianStrategy()
        kicked = strategy.exact_stats(exps_1d, InitialDataRequest(family="gaussian", kick=(2.0,)))
        resting = strategy.exact_stats(exps_1d, InitialDataRequest(family="gaussian"))

        reduced = WellCalculator.galilean_reduce(kicked, exps_1d)

        assert WellCalculator.carries_momentum(kicked)
        assert not WellCalculator.carries_momentum(reduced)
        assert reduced.grad2 == pytest.approx(resting.grad2, rel=1e-12)
        assert reduced.energy == pytest.approx(resting.energy, rel=1e-12)
        assert reduced.momentum == (0.0,)

    def test_ground_state_has_no_momentum(self, exps_1d, norms_1d):
        """Test that Q is left alone."""
        assert not WellCalculator.carries_momentum(q_stats(norms_1d, exps_1d))

    def test_zero_mass(self, exps_1d):
        """Test that the zero field cannot be boosted."""
        with pytest.raises(ZeroMass, match="zero mass"):
            WellCalculator.galilean_reduce(FieldStats.from_norms(0.0, 0.0, 0.0, 7.0), exps_1d)
