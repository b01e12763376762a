"""
Lambda sweep engine: one evolution per family parameter, optionally in a worker pool.
"""
from dataclasses import dataclass
import logging
from multiprocessing import Pool
from typing import List, Optional, Sequence

from src.core.exceptions import AtlasError
from src.entities.exponents import ExponentSet
from src.entities.grid import GridSpec
from src.entities.trajectory import EvolveControls
from src.repositories.ground_state_repository import GroundStateEntry, GroundStateRepository
from src.services.evolution_service import EvolutionService
from src.strategies.base import InitialDataRequest
from src.strategies.factory import InitialDataFactory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepJob:
    """Everything one worker needs; picklable."""
    index: int
    lam: float
    exps: ExponentSet
    grid: GridSpec
    controls: EvolveControls
    request: InitialDataRequest
    ground_state: GroundStateEntry


@dataclass(frozen=True)
class SweepRow:
    """
    Outcome of one sweep entry.

    Attributes:
        lam: Family parameter
        omega: E M^sigma over its ground-state value
        grad_ratio: |grad u||u|^sigma over its ground-state value
        verdict: Initial well verdict
        classification: Run classification (None when the row failed)
        t_event: Time of the guard that stopped the run
        steps: Base steps taken
        error: Failure message when the row could not be run
    """
    lam: float
    omega: Optional[float]
    grad_ratio: Optional[float]
    verdict: Optional[str]
    classification: Optional[str]
    t_event: Optional[float]
    steps: int
    error: Optional[str] = None

    def to_dict(self) -> dict:
        """Convert to dictionary representation (one CSV row)."""
        return {
            "lambda": self.lam,
            "omega": self.omega,
            "gradRatio": self.grad_ratio,
            "verdict": self.verdict,
            "classification": self.classification,
            "tEvent": self.t_event,
            "steps": self.steps,
            "error": self.error,
        }


def run_sweep_job(job: SweepJob) -> SweepRow:
    """Worker body: sample the data, evolve, summarize. Failures become error rows."""
    ground_states = GroundStateRepository()
    ground_states.add(job.ground_state)
    try:
        strategy = InitialDataFactory(ground_states).get_strategy(job.request.family)
        field = strategy.sample(job.grid, job.exps, job.request)
        service = EvolutionService(job.exps, job.ground_state.norms)
        record = service.evolve(field, job.controls)
    except (AtlasError, ValueError) as exc:
        logger.warning("Sweep row lambda=%g failed: %s", job.lam, exc)
        return SweepRow(
            lam=job.lam, omega=None, grad_ratio=None, verdict=None,
            classification=None, t_event=None, steps=0, error=str(exc),
        )
    well = record.initial_well
    return SweepRow(
        lam=job.lam,
        omega=well.omega,
        grad_ratio=well.grad_ratio,
        verdict=well.verdict.value,
        classification=record.classification.value,
        t_event=record.t_event,
        steps=record.steps,
    )


class SweepService:
    """
    Runs the lambda/omega dichotomy sweep.

    Rows come back in the order of the lambda list whether the jobs run
    serially or in parallel.
    """

    def __init__(self, ground_states: GroundStateRepository):
        self.ground_states = ground_states

    def build_jobs(
        self,
        exps: ExponentSet,
        grid: GridSpec,
        controls: EvolveControls,
        request: InitialDataRequest,
        lambdas: Sequence[float],
    ) -> List[SweepJob]:
        entry = self.ground_states.get_or_solve(exps)
        return [
            SweepJob(
                index=index,
                lam=float(lam),
                exps=exps,
                grid=grid,
                controls=controls,
                request=InitialDataRequest(
                    family=request.family,
                    lam=float(lam),
                    amplitude=request.amplitude,
                    width=request.width,
                    center=request.center,
                    kick=request.kick,
                    path=request.path,
                ),
                ground_state=entry,
            )
            for index, lam in enumerate(lambdas)
        ]

    def run(
        self,
        exps: ExponentSet,
        grid: GridSpec,
        controls: EvolveControls,
        request: InitialDataRequest,
        lambdas: Sequence[float],
        jobs: int = 1,
    ) -> List[SweepRow]:
        """
        Evolve one run per lambda.

        Args:
            exps: Exponent set
            grid: Grid shared by every run
            controls: Evolution controls shared by every run
            request: Family and fixed parameters; lambda is overridden per row
            lambdas: Family parameters, in output order
            jobs: Worker processes (1 runs in-process)

        Returns:
            One SweepRow per lambda, in input order
        """
        sweep_jobs = self.build_jobs(exps, grid, controls, request, lambdas)
        logger.info("Sweeping %d values of lambda with %d worker(s)", len(sweep_jobs), jobs)
        if jobs > 1 and len(sweep_jobs) > 1:
            with Pool(min(jobs, len(sweep_jobs))) as pool:
                return pool.map(run_sweep_job, sweep_jobs)
        return [run_sweep_job(job) for job in sweep_jobs]
