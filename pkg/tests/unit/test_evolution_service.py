"""
Unit tests for the split-step evolution, guards and scattering experiments.
"""
import numpy as np
import pytest

from src.core.exceptions import (
    DispersalInsufficient,
    InsufficientCheckpoints,
    PreconditionViolated,
    ZeroMass,
)
from src.entities.grid import FieldState, GridSpec
from src.entities.stats import WellVerdict
from src.entities.trajectory import Classification, EvolveControls, RunEventKind
from src.services.evolution_service import EvolutionService
from src.services.spectral import SpectralCalculus
from src.strategies.base import InitialDataRequest
from src.strategies.gaussian import GaussianStrategy
from src.strategies.ground_state import ScaledGroundStateStrategy


def gaussian(grid, exps, amplitude=1.0, width=1.0, kick=()):
    request = InitialDataRequest(family="gaussian", amplitude=amplitude, width=width, kick=kick)
    return GaussianStrategy().sample(grid, exps, request)


def scaled_q(ground_states, grid, exps, lam):
    request = InitialDataRequest(family="scaledQ", lam=lam)
    return ScaledGroundStateStrategy(ground_states).sample(grid, exps, request)


@pytest.fixture
def service(exps_1d, norms_1d):
    return EvolutionService(exps_1d, norms_1d)


class TestStrangStep:
    """Test suite for a single split step."""

    def test_mass_preserved(self, service, exps_1d):
        """Test that one step preserves the discrete mass."""
        grid = GridSpec(1, 20.0, 512)
        field = gaussian(grid, exps_1d, amplitude=0.9, kick=(0.5,))

        stepped = service.strang_step(field, 1e-3)

        assert service.conserved(stepped).mass == pytest.approx(
            service.conserved(field).mass, rel=1e-13
        )
        assert stepped.time == pytest.approx(1e-3)

    def test_rejects_nonpositive_dt(self, service, exps_1d):
        """Test that dt <= 0 is refused."""
        field = gaussian(GridSpec(1, 20.0, 64), exps_1d)
        with pytest.raises(ValueError, match="dt must be positive"):
            service.strang_step(field, 0.0)

    def test_second_order(self, service, exps_1d):
        """Test that halving dt divides the error by about four."""
        grid = GridSpec(1, 10.0, 256)
        field = gaussian(grid, exps_1d, amplitude=0.8)

        def run(dt):
            controls = EvolveControls(dt=dt, t_end=0.5, checkpoint_every=10 ** 6, max_phase=None)
            return service.evolve(field, controls).final_field.values

        reference = run(0.005 / 16)
        coarse = np.max(np.abs(run(0.01) - reference))
        fine = np.max(np.abs(run(0.005) - reference))

        assert 3.0 <= coarse / fine <= 5.0


class TestEvolve:
    """Test suite for evolution runs."""

    def test_conservation(self, service, exps_1d):
        """Test drift of mass, energy and momentum for a 1D p = 7 Gaussian."""
        grid = GridSpec(1, 20.0, 2048)
        field = gaussian(grid, exps_1d, amplitude=0.5, kick=(0.5,))
        controls = EvolveControls(dt=1e-4, t_end=1.0, checkpoint_every=1000)

        record = service.evolve(field, controls)
        first = record.checkpoints[0].stats
        last = record.checkpoints[-1].stats

        assert record.terminal_event.kind == RunEventKind.COMPLETED
        assert abs(last.mass - first.mass) / first.mass <= 1e-8
        assert abs(last.energy - first.energy) / abs(first.energy) <= 1e-6
        assert abs(last.momentum[0] - first.momentum[0]) / first.mass <= 1e-8

    def test_record_structure(self, service, exps_1d):
        """Test checkpoint cadence, the initial checkpoint and the single terminal event."""
        grid = GridSpec(1, 20.0, 256)
        field = gaussian(grid, exps_1d, amplitude=0.5)
        controls = EvolveControls(dt=1e-3, t_end=0.1, checkpoint_every=20, keep_fields=True)

        record = service.evolve(field, controls)
        times = [checkpoint.t for checkpoint in record.checkpoints]

        assert times[0] == 0.0
        assert len(times) == 6
        assert np.all(np.diff(times) > 0)
        assert len(record.events) == 1
        assert len(record.snapshots) == 6
        assert record.steps == 100
        assert record.classification == Classification.GLOBAL_IN_WELL
        assert record.t_event is None

    def test_standing_wave(self, service, exps_1d, ground_states):
        """Test that |e^{it} Q| stays put over t in [0, 1]."""
        grid = GridSpec(1, 20.0, 1024)
        field = scaled_q(ground_states, grid, exps_1d, 1.0)
        controls = EvolveControls(dt=5e-4, t_end=1.0, checkpoint_every=200, keep_fields=True)

        record = service.evolve(field, controls)

        modulus = np.abs(field.values)
        for snapshot in record.snapshots:
            assert np.max(np.abs(np.abs(snapshot.values) - modulus)) <= 1e-4

    def test_free_flow_keeps_gradient(self, service, exps_1d):
        """Test that the free flow preserves the gradient norm exactly."""
        grid = GridSpec(1, 20.0, 512)
        field = gaussian(grid, exps_1d, amplitude=3.0)
        controls = EvolveControls(dt=1e-2, t_end=1.0, checkpoint_every=25, nonlinear=False)

        record = service.evolve(field, controls)
        grads = [checkpoint.stats.grad2 for checkpoint in record.checkpoints]

        assert max(grads) == pytest.approx(min(grads), rel=1e-12)

    def test_time_reversal(self, service, exps_1d):
        """Test that forward, conjugate, forward, conjugate returns the data."""
        grid = GridSpec(1, 10.0, 256)
        field = gaussian(grid, exps_1d, amplitude=0.8)
        controls = EvolveControls(dt=1e-3, t_end=0.2, checkpoint_every=100, max_phase=None)

        forward = service.evolve(field, controls).final_field
        back = service.evolve(service.time_reverse(forward), controls).final_field
        returned = service.time_reverse(back)

        assert np.max(np.abs(returned.values - field.values)) <= 1e-10


class TestDichotomy:
    """Test suite for the scaled ground-state experiment in 1D, p = 7."""

    def test_below_threshold_stays_in_well(self, service, exps_1d, ground_states):
        """Test that 0.9 Q stays inside the well up to t = 5."""
        grid = GridSpec(1, 16.0, 4096)
        field = scaled_q(ground_states, grid, exps_1d, 0.9)
        controls = EvolveControls(dt=1e-4, t_end=5.0, checkpoint_every=1000)

        record = service.evolve(field, controls)

        assert record.classification == Classification.GLOBAL_IN_WELL
        assert all(c.well.verdict == WellVerdict.INSIDE_WELL for c in record.checkpoints)
        assert all(c.well.grad_ratio < 1.0 for c in record.checkpoints)

    def test_above_threshold_blows_up(self, service, exps_1d, ground_states):
        """Test that 1.1 Q triggers the gradient guard in finite time."""
        grid = GridSpec(1, 16.0, 4096)
        field = scaled_q(ground_states, grid, exps_1d, 1.1)
        controls = EvolveControls(dt=1e-4, t_end=2.0, checkpoint_every=1000)

        record = service.evolve(field, controls)

        assert record.initial_well.verdict == WellVerdict.OUTSIDE_WELL_ABOVE_GRADIENT
        assert record.classification == Classification.BLOW_UP_DETECTED
        assert record.terminal_event.kind == RunEventKind.BLOW_UP_GUARD
        assert record.t_event < 2.0


class TestSymmetries:
    """Test suite for the Galilean boost."""

    def test_boost_removes_momentum(self, service, exps_1d):
        """Test P = 0 after the boost, with mass and modulus unchanged."""
        grid = GridSpec(1, 20.0, 1024)
        field = gaussian(grid, exps_1d, amplitude=0.7, kick=(1.3,))

        boosted = service.galilean_boost(field)
        before, after = service.conserved(field), service.conserved(boosted)

        assert abs(after.momentum[0]) <= 1e-10 * before.mass
        assert after.mass == pytest.approx(before.mass, rel=1e-13)
        assert np.allclose(np.abs(boosted.values), np.abs(field.values))
        reduction = before.grad2 - after.grad2
        assert reduction == pytest.approx(before.momentum_norm2 / before.mass, rel=1e-8)

    def test_zero_mass(self, service):
        """Test that the boost of the zero field is refused."""
        with pytest.raises(ZeroMass, match="zero mass"):
            service.galilean_boost(FieldState.zeros(GridSpec(1, 10.0, 64)))


class TestScatteringDiagnostics:
    """Test suite for the Cauchy test and the wave-operator construction."""

    def test_free_flow_profiles_coincide(self, service, exps_1d):
        """Test that free-flow checkpoints pull back to the same profile."""
        grid = GridSpec(1, 20.0, 512)
        field = gaussian(grid, exps_1d, amplitude=1.0, kick=(0.2,))
        controls = EvolveControls(
            dt=1e-2, t_end=1.0, checkpoint_every=25, nonlinear=False, keep_fields=True
        )
        snapshots = service.evolve(field, controls).snapshots

        report = service.scattering_diagnostic(snapshots)

        assert len(report.times) == 5
        assert max(report.successive) <= 1e-10
        assert report.accumulation[0] == 0.0
        assert np.all(np.diff(report.accumulation) >= 0.0)

    def test_needs_three_fields(self, service, exps_1d):
        """Test the minimum number of checkpoint fields."""
        field = gaussian(GridSpec(1, 20.0, 64), exps_1d)
        with pytest.raises(InsufficientCheckpoints, match="at least 3"):
            service.scattering_diagnostic([field, field])

    def test_wave_operator(self, service, exps_1d):
        """Test mass, energy and well verdict of the constructed data."""
        grid = GridSpec(1, 40.0, 1024)
        psi = FieldState(grid, 0.5 * np.exp(-grid.coordinates[0] ** 2))
        controls = EvolveControls(dt=1e-3, t_end=1.0, checkpoint_every=100)

        report = service.wave_operator_approx(psi, 2.0, controls)

        grad2 = 2.0 * report.half_grad
        assert report.mass_u0 == pytest.approx(report.mass_psi, rel=1e-8)
        assert abs(report.energy - report.half_grad) <= 1e-3 * grad2
        assert report.well.verdict == WellVerdict.INSIDE_WELL
        assert report.u0.time == 0.0

    def test_wave_operator_energy_precondition(self, service):
        """Test that a scattering state above the energy level is refused."""
        grid = GridSpec(1, 40.0, 512)
        psi = FieldState(grid, 3.0 * np.exp(-grid.coordinates[0] ** 2))
        with pytest.raises(PreconditionViolated, match="exceeds"):
            service.wave_operator_approx(psi, 2.0, EvolveControls(dt=1e-3))

    def test_wave_operator_dispersal(self, service):
        """Test that a horizon too short to disperse psi is refused."""
        grid = GridSpec(1, 40.0, 512)
        psi = FieldState(grid, 0.5 * np.exp(-grid.coordinates[0] ** 2))
        with pytest.raises(DispersalInsufficient, match="increase T"):
            service.wave_operator_approx(psi, 0.05, EvolveControls(dt=1e-3))


class TestPerturbation:
    """Test suite for the long-time perturbation experiment."""

    def test_difference_scales_linearly(self, service, exps_1d):
        """Test that halving the data perturbation halves the space-time difference."""
        grid = GridSpec(1, 20.0, 512)
        base = gaussian(grid, exps_1d, amplitude=0.5)
        bump = np.exp(-grid.coordinates[0] ** 2)
        controls = EvolveControls(dt=1e-3, t_end=1.0, checkpoint_every=100)

        norms = []
        for delta in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
            perturbed = base.replace(base.values + delta * bump)
            report = service.perturbation_experiment(base, perturbed, controls)
            norms.append(report.difference_norm)
            assert report.forcing_norm == 0.0
            assert report.steps == 1000

        ratios = [b / a for a, b in zip(norms, norms[1:])]
        assert all(0.4 <= ratio <= 0.6 for ratio in ratios)

    def test_forcing_enters_the_difference(self, service, exps_1d):
        """Test that a forcing term alone separates identical data."""
        grid = GridSpec(1, 20.0, 256)
        base = gaussian(grid, exps_1d, amplitude=0.5)
        controls = EvolveControls(dt=1e-3, t_end=0.5, checkpoint_every=100)

        def forcing(t, grid):
            return 1e-3 * np.exp(-grid.coordinates[0] ** 2) * np.ones(grid.shape)

        report = service.perturbation_experiment(base, base.copy(), controls, forcing)

        assert report.forcing_norm > 0.0
        assert report.difference_norm > 0.0
        assert report.data_norm == 0.0
        assert SpectralCalculus.h1_norm(base) > report.final_h1
