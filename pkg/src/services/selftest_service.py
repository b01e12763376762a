"""
Property suites run by the selftest verb.
"""
from dataclasses import dataclass, field
import logging
import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import AtlasError, ValidationError
from src.data.presets import REFERENCE_CASES, REFERENCE_GRIDS, SELFTEST_SUITES
from src.entities.exponents import ExponentSet
from src.entities.grid import CutoffProfile, FieldState, GridSpec
from src.entities.stats import BoundCheck
from src.entities.trajectory import EvolveControls
from src.repositories.ground_state_repository import GroundStateEntry, GroundStateRepository
from src.services.evolution_service import EvolutionService
from src.services.gronwall_service import GronwallVerifier
from src.services.ground_state_solver import GroundStateSolver
from src.services.spectral import SpectralCalculus
from src.services.virial_calculator import VirialCalculator
from src.services.well_calculator import WellCalculator
from src.strategies.base import InitialDataRequest
from src.strategies.gaussian import GaussianStrategy
from src.strategies.ground_state import ScaledGroundStateStrategy

logger = logging.getLogger(__name__)

# Grids on which Q is sampled for the GN equality check, per dimension
GN_GRIDS: Dict[int, Tuple[float, int]] = {1: (16.0, 1024), 2: (16.0, 128), 3: (10.0, 64)}


@dataclass(frozen=True)
class SuiteResult:
    """
    Outcome of one property suite.

    Attributes:
        name: Suite name
        checks: Every comparison made, as (measured, allowed) pairs
        error: Message when the suite aborted on an exception
        seconds: Wall time (kept out of the data record)
    """
    name: str
    checks: Tuple[BoundCheck, ...] = ()
    error: Optional[str] = None
    seconds: float = 0.0

    @property
    def failures(self) -> List[BoundCheck]:
        return [check for check in self.checks if not check.satisfied]

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": len(self.checks),
            "failures": [check.to_dict() for check in self.failures],
            "error": self.error,
        }


@dataclass(frozen=True)
class SelftestSummary:
    """Results of every requested suite, in request order."""
    seed: int
    suites: Tuple[SuiteResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "seed": self.seed,
            "passed": self.passed,
            "suites": [suite.to_dict() for suite in self.suites],
        }


def at_most(name: str, measured: float, allowed: float) -> BoundCheck:
    return BoundCheck(name, float(measured), float(allowed), bool(measured <= allowed))


def at_least(name: str, measured: float, required: float) -> BoundCheck:
    return BoundCheck(name, float(measured), float(required), bool(measured >= required))


class SelftestService:
    """
    Seeded property suites over every numerical module.

    Tolerances:
        pohozaev: relative residual 1e-6 per identity; 1D closed form 1e-8 pointwise
        gn: constant cross-check 1e-6 relative; random fields ratio <= 1; sampled Q ratio >= 0.999
            and the H^{s_c} bound on 0.9 Q
        cutoff: zero violations over the random band-limited fields
        gronwall: every instance satisfies the conclusion; Phi spot values to 1e-12
        conservation: drift of M 1e-8, E 1e-6, P 1e-8 (relative)
        virial: finite differences within 1e-3 of the analytic derivatives
            and the zero-momentum bound on z_R' for a counter-kicked pair
    """

    POHOZAEV_TOL = 1e-6
    CLOSED_FORM_TOL = 1e-8
    GN_CONSTANT_TOL = 1e-6
    GN_EQUALITY_FLOOR = 0.999
    # Amplitude of the in-well sample lam Q used for the critical-norm bound
    INSIDE_AMPLITUDE = 0.9
    PHI_TOL = 1e-12
    MASS_DRIFT_TOL = 1e-8
    ENERGY_DRIFT_TOL = 1e-6
    MOMENTUM_DRIFT_TOL = 1e-8
    VIRIAL_FD_TOL = 1e-3
    MOMENTUM_FREE_RADIUS = 5.0
    # Mass factor injected by the corrupt-norms hook
    CORRUPTION = 1.01

    def __init__(
        self,
        ground_states: GroundStateRepository,
        seed: int = 0,
        gronwall_instances: int = 100,
        cutoff_fields: int = 200,
        gn_fields: int = 100,
        corrupt_norms: bool = False,
    ):
        self.ground_states = ground_states
        self.seed = seed
        self.gronwall_instances = gronwall_instances
        self.cutoff_fields = cutoff_fields
        self.gn_fields = gn_fields
        self.corrupt_norms = corrupt_norms
        self._suites: Dict[str, Callable[[], List[BoundCheck]]] = {
            "pohozaev": self.pohozaev_suite,
            "gn": self.gn_suite,
            "cutoff": self.cutoff_suite,
            "gronwall": self.gronwall_suite,
            "conservation": self.conservation_suite,
            "virial": self.virial_suite,
        }

    def run(self, suites: Optional[Sequence[str]] = None) -> SelftestSummary:
        """
        Run the named suites (all of them by default).

        Raises:
            ValidationError: If a suite name is unknown
        """
        names = list(SELFTEST_SUITES if suites is None else suites)
        unknown = [name for name in names if name not in self._suites]
        if unknown:
            raise ValidationError(f"Unknown suites {unknown}; known: {list(SELFTEST_SUITES)}")

        results = []
        for name in names:
            started = time.perf_counter()
            try:
                checks = tuple(self._suites[name]())
                error = None
            except AtlasError as exc:
                checks, error = (), str(exc)
            except (ValueError, ArithmeticError) as exc:
                logger.exception("Suite %s raised", name)
                checks, error = (), f"{type(exc).__name__}: {exc}"
            result = SuiteResult(name, checks, error, time.perf_counter() - started)
            level = logging.INFO if result.passed else logging.ERROR
            logger.log(
                level, "Suite %s: %s (%d checks, %d failures, %.1fs)",
                name, "pass" if result.passed else "FAIL", len(result.checks),
                len(result.failures), result.seconds,
            )
            results.append(result)
        return SelftestSummary(seed=self.seed, suites=tuple(results))

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def _reference(self) -> List[Tuple[ExponentSet, GroundStateEntry]]:
        cases = []
        for N, p in REFERENCE_CASES:
            exps = WellCalculator.derive_exponents(N, p)
            cases.append((exps, self.ground_states.get_or_solve(exps)))
        return cases

    # ========== Ground state ==========

    def pohozaev_suite(self) -> List[BoundCheck]:
        checks = []
        for exps, entry in self._reference():
            norms = entry.norms
            if self.corrupt_norms:
                norms = norms.with_mass_factor(self.CORRUPTION)
            residuals = GroundStateSolver.pohozaev_residuals(norms, exps)
            label = f"N{exps.N}p{exps.p}"
            for which, residual in zip(("grad", "pot", "energy"), residuals):
                checks.append(at_most(f"pohozaev.{which}.{label}", residual, self.POHOZAEV_TOL))
            if exps.N == 1:
                profile = entry.profile
                exact = GroundStateSolver.closed_form_1d(profile.r, float(exps.p))
                error = float(np.max(np.abs(profile.q - exact)))
                checks.append(at_most(f"closedForm.{label}", error, self.CLOSED_FORM_TOL))
        return checks

    def gn_suite(self) -> List[BoundCheck]:
        checks = []
        rng = self._rng(1)
        for exps, entry in self._reference():
            label = f"N{exps.N}p{exps.p}"
            p = float(exps.p)
            c_direct, c_identity = GroundStateSolver.gn_constant(entry.norms, exps)
            checks.append(at_most(
                f"gnConstant.{label}", abs(c_direct - c_identity) / c_direct, self.GN_CONSTANT_TOL
            ))

            extent, points = GN_GRIDS[exps.N]
            grid = GridSpec(exps.N, extent, points)
            q_field = ScaledGroundStateStrategy(self.ground_states).sample(
                grid, exps, InitialDataRequest(family="scaledQ", lam=1.0)
            )
            q_stats = SpectralCalculus.field_stats(q_field, p)
            equality = GroundStateSolver.gn_ratio(q_stats, c_direct, exps)
            checks.append(at_least(f"gnEquality.{label}", equality, self.GN_EQUALITY_FLOOR))

            inside = ScaledGroundStateStrategy(self.ground_states).sample(
                grid, exps, InitialDataRequest(family="scaledQ", lam=self.INSIDE_AMPLITUDE)
            )
            status = WellCalculator.well_membership(
                SpectralCalculus.field_stats(inside, p), entry.norms, exps
            )
            critical = SpectralCalculus.sobolev_norm(inside, float(exps.s_c))
            critical = critical ** float(1 + exps.sigma)
            bound = WellCalculator.critical_norm_bound(status, entry.norms)
            checks.append(at_most(f"criticalNorm.{label}", critical, bound * (1.0 + 1e-9)))

            worst = 0.0
            for _ in range(self.gn_fields):
                sample = self.random_mixture(grid, rng)
                stats = SpectralCalculus.field_stats(sample, p)
                ratio = GroundStateSolver.gn_ratio(stats, c_direct, exps)
                worst = max(worst, ratio)
            checks.append(at_most(f"gnRandom.{label}", worst, 1.0))
        return checks

    @staticmethod
    def random_mixture(grid: GridSpec, rng: np.random.Generator, bumps: int = 3) -> FieldState:
        """Sum of randomly placed complex Gaussians well inside the box."""
        values = np.zeros(grid.shape, dtype=complex)
        for _ in range(bumps):
            center = rng.uniform(-0.25 * grid.extent, 0.25 * grid.extent, grid.N)
            width = rng.uniform(0.7, 2.0)
            amplitude = rng.normal() + 1j * rng.normal()
            kick = rng.normal(0.0, 0.5, grid.N)
            offset2 = sum((x - c) ** 2 for x, c in zip(grid.coordinates, center))
            phase = sum(k * x for k, x in zip(kick, grid.coordinates))
            values = values + amplitude * np.exp(-offset2 / (2.0 * width ** 2) + 1j * phase)
        return FieldState(grid=grid, values=values)

    @staticmethod
    def counter_kicked_pair(grid: GridSpec, exps: ExponentSet) -> FieldState:
        """Equal Gaussians at -2 and 8 on the first axis with opposite kicks 1.5."""
        strategy = GaussianStrategy()
        values = sum(
            strategy.sample(
                grid, exps, InitialDataRequest(family="gaussian", center=(c,), kick=(k,))
            ).values
            for c, k in ((8.0, 1.5), (-2.0, -1.5))
        )
        return FieldState(grid=grid, values=values)

    # ========== Spectral ==========

    def cutoff_suite(self) -> List[BoundCheck]:
        exps = WellCalculator.derive_exponents(*REFERENCE_CASES[0])
        extent, points = REFERENCE_GRIDS["cutoff"]
        grid = GridSpec(exps.N, extent, points)
        rng = self._rng(2)
        orders = (0.0, float(exps.lam), 1.0)

        checks = []
        for index in range(self.cutoff_fields):
            sample = SpectralCalculus.band_limited_field(grid, rng, 0.5 * grid.k_max)
            profile = CutoffProfile(rng.uniform(0.5, 0.25 * grid.k_max))
            for lam in orders:
                for check in SpectralCalculus.cutoff_inequalities(sample, profile, exps, lam):
                    checks.append(BoundCheck(
                        f"{check.name}.lam{lam:.4g}.field{index}",
                        check.lhs, check.rhs, check.satisfied,
                    ))
        return checks

    # ========== Gronwall ==========

    def gronwall_suite(self) -> List[BoundCheck]:
        checks = [
            at_most(f"phi({s})", abs(GronwallVerifier.phi_big(s) - exact) / exact, self.PHI_TOL)
            for s, exact in ((0.0, 4.0), (0.5, 12.0), (1.0, 48.0))
        ]
        rng = self._rng(3)
        betas = (1.0, 1.5, 2.0)
        for index in range(self.gronwall_instances):
            beta = betas[index % len(betas)]
            gamma = (2.0 * beta, 4.0 * beta, math.inf)[(index // len(betas)) % 3]
            instance = GronwallVerifier.sample_instance(rng, beta, gamma)
            report = GronwallVerifier.verify_instance(instance)
            checks.append(BoundCheck(
                f"gronwall.instance{index}", report.worst_ratio, 1.0, report.holds
            ))
        return checks

    # ========== Evolution ==========

    def conservation_suite(self) -> List[BoundCheck]:
        exps = WellCalculator.derive_exponents(*REFERENCE_CASES[0])
        entry = self.ground_states.get_or_solve(exps)
        extent, points = REFERENCE_GRIDS["conservation"]
        grid = GridSpec(exps.N, extent, points)
        request = InitialDataRequest(family="gaussian", amplitude=0.5, width=1.0, kick=(0.5,))
        initial = GaussianStrategy().sample(grid, exps, request)

        service = EvolutionService(exps, entry.norms)
        controls = EvolveControls(dt=1e-4, t_end=1.0, checkpoint_every=1000)
        record = service.evolve(initial, controls)
        first, last = record.checkpoints[0].stats, record.final_field
        final = service.conserved(last)

        momentum_scale = math.sqrt(first.mass * first.grad2)
        momentum_drift = max(
            abs(a - b) for a, b in zip(first.momentum, final.momentum)
        ) / momentum_scale
        return [
            at_least("conservation.completed", last.time, controls.t_end - 1e-9),
            at_most(
                "conservation.mass", abs(final.mass - first.mass) / first.mass, self.MASS_DRIFT_TOL
            ),
            at_most(
                "conservation.energy",
                abs(final.energy - first.energy) / abs(first.energy),
                self.ENERGY_DRIFT_TOL,
            ),
            at_most("conservation.momentum", momentum_drift, self.MOMENTUM_DRIFT_TOL),
        ]

    # ========== Virial ==========

    def virial_suite(self) -> List[BoundCheck]:
        exps = WellCalculator.derive_exponents(*REFERENCE_CASES[0])
        entry = self.ground_states.get_or_solve(exps)
        extent, points = REFERENCE_GRIDS["freeGaussian"]
        grid = GridSpec(exps.N, extent, points)
        request = InitialDataRequest(family="gaussian", amplitude=1.0, width=1.0, kick=(0.5,))
        initial = GaussianStrategy().sample(grid, exps, request)

        weights = VirialCalculator.make_weights(18.0, grid)
        controls = EvolveControls(dt=1e-3, t_end=1.0, checkpoint_every=50, nonlinear=False)
        service = EvolutionService(exps, entry.norms)
        record = service.evolve(initial, controls, weights)
        report = VirialCalculator.fd_crosscheck(record.virial)

        local = VirialCalculator.make_weights(self.MOMENTUM_FREE_RADIUS, grid)
        free = EvolveControls(dt=1e-3, t_end=0.5, checkpoint_every=50, nonlinear=False)
        pair = service.galilean_boost(self.counter_kicked_pair(grid, exps))
        samples = service.evolve(pair, free, local).virial
        worst = max(
            max(abs(rate) for rate in sample.zR_prime)
            / VirialCalculator.momentum_free_bound(sample)
            for sample in samples
        )
        return [
            at_most("virial.first", report.first_error, self.VIRIAL_FD_TOL),
            at_most("virial.second", report.second_error, self.VIRIAL_FD_TOL),
            at_most("virial.momentumFree", worst, 1.0),
        ]
