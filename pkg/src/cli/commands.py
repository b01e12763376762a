"""
One handler per CLI verb.

Each handler reads a validated RunConfig, does its work through the
services, writes its files through the run repository and finishes with
the manifest. Handlers return the process exit status.
"""
from datetime import datetime, timezone
import logging
import math
import time
from typing import Callable, Dict, List, Optional

import pandas as pd

from src.cli import __version__
from src.cli.schemas import (
    ClassifyResult,
    EvolveResult,
    GroundStateResult,
    RunManifest,
    SolverTolerances,
    Timing,
    VirialResult,
)
from src.core.config import RunConfig
from src.core.dependencies import Repositories, Services
from src.core.exceptions import InsufficientCheckpoints, ValidationError
from src.entities.exponents import ExponentSet
from src.entities.grid import GridSpec
from src.entities.profile import QNorms
from src.entities.stats import FieldStats
from src.entities.trajectory import TrajectoryRecord
from src.repositories.ground_state_repository import profile_frame
from src.services.evolution_service import EvolutionService
from src.services.ground_state_solver import GroundStateSolver
from src.services.spectral import SpectralCalculus
from src.services.virial_calculator import VirialCalculator
from src.services.well_calculator import WellCalculator
from src.strategies.base import InitialData

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")


class RunContext:
    """Configuration, containers and clock shared by the steps of one command."""

    def __init__(self, config: RunConfig, repos: Repositories, services: Services):
        self.config = config
        self.repos = repos
        self.services = services
        self.started_at = datetime.now(timezone.utc).isoformat()
        self._clock = time.perf_counter()
        self.steps = 0
        self.exps: Optional[ExponentSet] = None
        self.thresholds: Optional[QNorms] = None

    def exponents(self) -> ExponentSet:
        if self.exps is None:
            self.exps = WellCalculator.derive_exponents(self.config.N, self.config.p)
        return self.exps

    def ground_state_norms(self) -> QNorms:
        if self.thresholds is None:
            self.thresholds = self.repos.ground_states.get_or_solve(self.exponents()).norms
        return self.thresholds

    def grid(self) -> GridSpec:
        return GridSpec(self.config.N, self.config.grid.extent, self.config.grid.points)

    def initial_data(self) -> InitialData:
        request = self.config.initial.to_request()
        strategy = self.services.initial_data.get_strategy(request.family)
        return strategy.build(self.grid(), self.exponents(), request)

    def finish(self) -> None:
        """Write the manifest last so it can hash every other file."""
        config = self.config
        manifest = RunManifest(
            version=__version__,
            experiment=config.experiment,
            seed=config.seed,
            config=config.snapshot(),
            exponents=self.exps.to_dict() if self.exps else None,
            thresholds=self.thresholds.to_dict() if self.thresholds else None,
            tolerances=SolverTolerances(
                groundStateTolerance=config.ground_state.tolerance,
                boundaryBand=WellCalculator.BOUNDARY_TOLERANCE,
                resolutionFraction=config.controls.resolution_fraction,
                blowupGradientFactor=config.controls.blowup_gradient_factor,
            ),
            steps=self.steps,
            timing=Timing(
                startedAt=self.started_at, wallSeconds=time.perf_counter() - self._clock
            ),
        )
        path = self.repos.runs.write_manifest(manifest.model_dump())
        logger.info("Run written to %s", path.parent)


def trajectory_frame(record: TrajectoryRecord, N: int) -> pd.DataFrame:
    """One row per checkpoint: conserved quantities, well ratios and Strichartz accumulator."""
    rows = []
    for checkpoint in record.checkpoints:
        stats = checkpoint.stats
        row = {"t": checkpoint.t, "M": stats.mass, "E": stats.energy}
        for axis, value in zip(AXES[:N], stats.momentum):
            row[f"P{axis}"] = value
        row.update({
            "gradNorm": math.sqrt(stats.grad2),
            "gradProduct": checkpoint.grad_product,
            "omega": checkpoint.well.omega,
            "gradRatio": checkpoint.well.grad_ratio,
            "verdict": checkpoint.well.verdict.value,
            "lrNorm": checkpoint.lr_norm,
            "accumulated": checkpoint.accumulated,
            "tailFraction": checkpoint.tail_fraction,
        })
        rows.append(row)
    return pd.DataFrame(rows)


def virial_frame(record: TrajectoryRecord, N: int) -> pd.DataFrame:
    rows = []
    for sample in record.virial:
        row = {"t": sample.t}
        for axis, value, rate in zip(AXES[:N], sample.zR, sample.zR_prime):
            row[f"zR{axis}"] = value
            row[f"zRPrime{axis}"] = rate
        row.update({
            "ZR": sample.ZR,
            "ZRPrime": sample.ZR_prime,
            "ZRSecond": sample.ZR_second,
            "RFunctional": sample.R_functional,
            "outerH1": sample.outer_h1,
        })
        rows.append(row)
    return pd.DataFrame(rows)


# ========== VERBS ==========

def cmd_exponents(ctx: RunContext) -> int:
    """Derive the exponent set with exact rationals."""
    exps = ctx.exponents()
    ctx.repos.runs.write_json("exponents.json", exps.to_dict())
    for key, value in exps.to_dict().items():
        print(f"{key} = {value}")
    ctx.finish()
    return 0


def cmd_groundstate(ctx: RunContext) -> int:
    """Solve Q, write the profile and its norms."""
    exps = ctx.exponents()
    entry = ctx.repos.ground_states.get_or_solve(exps)
    ctx.thresholds = entry.norms
    c_direct, c_identity = GroundStateSolver.gn_constant(entry.norms, exps)
    result = GroundStateResult(
        profile=entry.profile.to_dict(),
        norms=entry.norms.to_dict(),
        pohozaevResiduals=list(GroundStateSolver.pohozaev_residuals(entry.norms, exps)),
        gnConstantDirect=c_direct,
        gnConstantIdentity=c_identity,
    )
    ctx.repos.runs.write_csv("groundstate.csv", profile_frame(entry.profile))
    ctx.repos.runs.write_json("groundstate.json", result.model_dump())
    ctx.finish()
    return 0


def cmd_classify(ctx: RunContext) -> int:
    """Well verdict of the configured initial datum."""
    exps = ctx.exponents()
    thresholds = ctx.ground_state_norms()
    data = ctx.initial_data()
    stats: FieldStats = data.exact_stats or SpectralCalculus.field_stats(
        data.field, float(exps.p)
    )
    reduction = None
    if WellCalculator.carries_momentum(stats):
        boosted = WellCalculator.galilean_reduce(stats, exps)
        reduction = stats.grad2 - boosted.grad2
        logger.info("Boosted away momentum %s, |grad u|^2 drops by %.9g", stats.momentum, reduction)
        stats = boosted
    status = WellCalculator.well_membership(stats, thresholds, exps)

    bounds = None
    if status.grad_ratio <= 1.0 + WellCalculator.BOUNDARY_TOLERANCE:
        bounds = WellCalculator.energy_bounds(stats, thresholds, exps).to_dict()
    eta = WellCalculator.coercivity_constant(status.omega, exps) if status.inside else None

    result = ClassifyResult(
        initialData=data.request.to_dict(),
        stats=stats.to_dict(),
        statsSource="exact" if data.exact_stats else "grid",
        well=status.to_dict(),
        energyBounds=bounds,
        coercivityConstant=eta,
        galileanReduction=reduction,
    )
    ctx.repos.runs.write_json("classify.json", result.model_dump())
    print(f"{status.verdict.value} omega={status.omega:.9g} gradRatio={status.grad_ratio:.9g}")
    ctx.finish()
    return 0


def cmd_evolve(ctx: RunContext) -> int:
    """Evolve the configured datum and write its trajectory."""
    exps = ctx.exponents()
    service = EvolutionService(exps, ctx.ground_state_norms())
    data = ctx.initial_data()
    field, reduction = data.field, None
    before = service.conserved(field)
    if WellCalculator.carries_momentum(before):
        field = service.galilean_boost(field)
        reduction = before.grad2 - service.conserved(field).grad2
        logger.info(
            "Boosted away momentum %s, |grad u|^2 drops by %.9g", before.momentum, reduction
        )
    controls = ctx.config.controls.to_controls()
    record = service.evolve(field, controls)
    ctx.steps = record.steps

    scattering = None
    if controls.keep_fields:
        try:
            scattering = service.scattering_diagnostic(record.snapshots).to_dict()
        except InsufficientCheckpoints as exc:
            logger.warning("No scattering diagnostic: %s", exc)

    result = EvolveResult(
        initialData=data.request.to_dict(),
        grid=data.field.grid.to_dict(),
        controls=controls.to_dict(),
        trajectory=record.to_dict(),
        scattering=scattering,
        galileanReduction=reduction,
    )
    ctx.repos.runs.write_csv("trajectory.csv", trajectory_frame(record, exps.N))
    ctx.repos.runs.write_json("summary.json", result.model_dump())
    if ctx.config.save_field:
        ctx.repos.runs.write_field("final_field.bin", record.final_field)
    print(f"{record.classification.value} steps={record.steps} tEvent={record.t_event}")
    ctx.finish()
    return 0


def cmd_sweep(ctx: RunContext) -> int:
    """Dichotomy sweep over the configured lambda list."""
    lambdas = ctx.config.sweep.lambdas
    if not lambdas:
        raise ValidationError("The sweep needs at least one lambda")
    exps = ctx.exponents()
    ctx.ground_state_norms()
    rows = ctx.services.sweep.run(
        exps,
        ctx.grid(),
        ctx.config.controls.to_controls(),
        ctx.config.initial.to_request(),
        lambdas,
        jobs=ctx.config.jobs,
    )
    ctx.steps = sum(row.steps for row in rows)
    ctx.repos.runs.write_csv("sweep.csv", pd.DataFrame([row.to_dict() for row in rows]))
    for row in rows:
        print(f"lambda={row.lam:g} {row.verdict} -> {row.classification or row.error}")
    ctx.finish()
    return 0


def cmd_virial(ctx: RunContext) -> int:
    """Evolve with virial weights; finite-difference and coercivity checks."""
    exps = ctx.exponents()
    service = EvolutionService(exps, ctx.ground_state_norms())
    data = ctx.initial_data()
    effective = VirialCalculator.effective_radius(data.field)
    radius = ctx.config.virial.radius or ctx.config.virial.radius_factor * effective
    weights = VirialCalculator.make_weights(radius, data.field.grid)

    controls = ctx.config.controls.to_controls()
    record = service.evolve(data.field, controls, weights)
    ctx.steps = record.steps

    fd = None
    try:
        fd = VirialCalculator.fd_crosscheck(record.virial).to_dict()
    except InsufficientCheckpoints as exc:
        logger.warning("No finite-difference check: %s", exc)

    initial = record.checkpoints[0].stats
    coercivity = None
    if record.initial_well.inside:
        eta = WellCalculator.coercivity_constant(record.initial_well.omega, exps)
        coercivity = VirialCalculator.coercivity(record.virial, eta, initial).to_dict()

    result = VirialResult(
        radius=radius,
        effectiveRadius=effective,
        trajectory=record.to_dict(),
        fdCrosscheck=fd,
        coercivity=coercivity,
        varianceRateBound=list(VirialCalculator.variance_rate_bound(weights, initial)),
    )
    ctx.repos.runs.write_csv("virial.csv", virial_frame(record, exps.N))
    ctx.repos.runs.write_csv("trajectory.csv", trajectory_frame(record, exps.N))
    ctx.repos.runs.write_json("virial.json", result.model_dump())
    ctx.finish()
    return 0


def cmd_selftest(ctx: RunContext, suites: Optional[List[str]] = None) -> int:
    """Run the property suites; exit status 1 when any fails."""
    summary = ctx.services.selftest.run(suites or ctx.config.selftest.suites)
    ctx.repos.runs.write_json("selftest.json", summary.to_dict())
    for suite in summary.suites:
        print(f"{suite.name}: {'pass' if suite.passed else 'FAIL'} ({len(suite.checks)} checks)")
    ctx.finish()
    return 0 if summary.passed else 1


COMMANDS: Dict[str, Callable[[RunContext], int]] = {
    "exponents": cmd_exponents,
    "groundstate": cmd_groundstate,
    "classify": cmd_classify,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "virial": cmd_virial,
    "selftest": cmd_selftest,
    "gronwall-selftest": lambda ctx: cmd_selftest(ctx, ["gronwall"]),
    "cutoff-selftest": lambda ctx: cmd_selftest(ctx, ["cutoff"]),
}
