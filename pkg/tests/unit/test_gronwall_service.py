"""
Unit tests for the Gronwall-type inequality checker.
"""
import math

import numpy as np
import pytest

from src.core.exceptions import HypothesisFails, ValidationError
from src.entities.gronwall import GronwallInstance
from src.services.gronwall_service import GronwallVerifier


def constant_instance(phi_value, f_value, eta, beta=1.0, gamma=2.0, n=101):
    t = np.linspace(0.0, 1.0, n)
    return GronwallInstance(
        beta=beta, gamma=gamma, T=1.0, t=t,
        f=np.full(n, f_value), phi=np.full(n, phi_value), eta=eta,
    )


class TestPhi:
    """Test suite for Phi(s) = 2 Gamma(3 + 2s)."""

    @pytest.mark.parametrize("s, expected", [(0.0, 4.0), (0.5, 12.0), (1.0, 48.0)])
    def test_values(self, s, expected):
        """Test Phi at integer arguments of Gamma."""
        assert GronwallVerifier.phi_big(s) == pytest.approx(expected)

    def test_negative_argument(self):
        """Test that Phi is refused for s < 0."""
        with pytest.raises(ValidationError, match="s >= 0"):
            GronwallVerifier.phi_big(-0.1)


class TestRunningNorms:
    """Test suite for running norms on the sample grid."""

    def test_constant_function(self):
        """Test |c|_{L^q(0,t)} = c t^{1/q}."""
        t = np.linspace(0.0, 2.0, 201)
        norms = GronwallVerifier.running_norm(t, np.full_like(t, 3.0), 2.0)

        assert np.allclose(norms, 3.0 * np.sqrt(t), rtol=1e-12, atol=1e-12)

    def test_supremum(self):
        """Test that q = inf gives the running maximum."""
        t = np.linspace(0.0, 1.0, 5)
        g = np.array([1.0, 3.0, 2.0, 5.0, 4.0])

        norms = GronwallVerifier.running_norm(t, g, math.inf)

        assert list(norms) == [1.0, 3.0, 3.0, 5.0, 5.0]


class TestPartition:
    """Test suite for the L^rho partition of [0, T]."""

    def test_unit_function(self):
        """Test f = 1, rho = 1 splits [0, 1] at 1/2."""
        t = np.linspace(0.0, 1.0, 101)

        report = GronwallVerifier.partition(t, np.ones_like(t), 1.0)

        assert report.breakpoints == pytest.approx((0.0, 0.5, 1.0), abs=1e-10)
        assert report.pieces == 2
        assert report.count_bound == pytest.approx(3.0)

    def test_count_bound(self):
        """Test the piece count against (2|f|)^rho + 1 and the piece norms."""
        t = np.linspace(0.0, 1.0, 401)

        report = GronwallVerifier.partition(t, np.full_like(t, 3.0), 2.0)

        assert report.total_norm == pytest.approx(3.0, rel=1e-10)
        assert report.pieces <= report.count_bound
        assert all(norm == pytest.approx(0.5, rel=1e-8) for norm in report.piece_norms[:-1])
        assert report.piece_norms[-1] <= 0.5 + 1e-8

    def test_rho_below_one(self):
        """Test that rho < 1 is refused."""
        t = np.linspace(0.0, 1.0, 11)
        with pytest.raises(ValidationError, match="at least 1"):
            GronwallVerifier.partition(t, np.ones_like(t), 0.5)


class TestInstances:
    """Test suite for sampled instances and their verification."""

    def test_rho(self):
        """Test 1/rho = 1/beta - 1/gamma and rho = beta for gamma = inf."""
        assert constant_instance(1.0, 1.0, 1.0, beta=1.0, gamma=2.0).rho == pytest.approx(2.0)
        assert constant_instance(1.0, 1.0, 1.0, beta=1.5, gamma=math.inf).rho == 1.5

    def test_validation(self):
        """Test the exponent order and the sign of the samples."""
        with pytest.raises(ValueError, match="beta < gamma"):
            constant_instance(1.0, 1.0, 1.0, beta=2.0, gamma=2.0)
        with pytest.raises(ValueError, match="nonnegative"):
            constant_instance(-1.0, 1.0, 1.0)

    @pytest.mark.parametrize("beta, factor", [(1.0, 2.0), (1.5, 4.0), (2.0, math.inf)])
    def test_sampled_instances_hold(self, beta, factor):
        """Test the conclusion on seeded random instances."""
        rng = np.random.default_rng([7, int(beta * 10)])
        gamma = beta * factor
        for _ in range(20):
            inst = GronwallVerifier.sample_instance(rng, beta, gamma)

            report = GronwallVerifier.verify_instance(inst)

            assert report.hypothesis_margin >= -1e-9
            assert report.holds, report.to_dict()
            assert report.worst_ratio <= 1.0

    def test_hypothesis_failure(self):
        """Test that phi = 1, f = 0 breaks the hypothesis for eta = 1/2."""
        with pytest.raises(HypothesisFails, match="Hypothesis fails"):
            GronwallVerifier.verify_instance(constant_instance(1.0, 0.0, 0.5))

    def test_conclusion_for_zero_forcing(self):
        """Test phi = 1, f = 0, eta = 1: the bound is eta Phi(0) = 4."""
        report = GronwallVerifier.verify_instance(constant_instance(1.0, 0.0, 1.0))

        assert report.holds
        assert np.allclose(report.conclusion_rhs, 4.0)
        assert report.worst_ratio == pytest.approx(0.25)

    def test_with_eta(self):
        """Test that with_eta keeps the samples."""
        inst = constant_instance(1.0, 0.5, 1.0)
        lowered = inst.with_eta(0.25)

        assert lowered.eta == 0.25
        assert lowered.t is inst.t
