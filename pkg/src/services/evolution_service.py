"""
Strang split-step evolution with conserved-quantity tracking and blow-up guards.
"""
from dataclasses import dataclass, replace
import logging
import math
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.fft

from src.core.exceptions import (
    DispersalInsufficient,
    InsufficientCheckpoints,
    NonFiniteField,
    PreconditionViolated,
    ZeroMass,
)
from src.entities.exponents import ExponentSet
from src.entities.grid import FieldState, GridSpec
from src.entities.profile import QNorms
from src.entities.stats import FieldStats, WellStatus
from src.entities.trajectory import (
    Checkpoint,
    Classification,
    EvolveControls,
    RunEvent,
    RunEventKind,
    TrajectoryRecord,
)
from src.entities.virial import VirialWeights
from src.services.spectral import SpectralCalculus
from src.services.virial_calculator import VirialCalculator
from src.services.well_calculator import WellCalculator

logger = logging.getLogger(__name__)

# Forcing term e(t) on a grid, for i u_t + Lap u + |u|^{p-1} u = e
Forcing = Callable[[float, GridSpec], np.ndarray]


class SplitStepIntegrator:
    """
    Strang splitting on raw arrays: half free step, exact phase rotation, half free step.

    Half-step free multipliers are cached per substep length.
    """

    def __init__(self, grid: GridSpec, p: float, nonlinear: bool = True):
        self.grid = grid
        self.alpha = float(p) - 1.0
        self.nonlinear = nonlinear
        self._half_multipliers: Dict[float, np.ndarray] = {}

    def half_multiplier(self, dt: float) -> np.ndarray:
        """e^{-i (dt/2) |xi|^2}."""
        multiplier = self._half_multipliers.get(dt)
        if multiplier is None:
            multiplier = np.exp(-0.5j * dt * self.grid.k2)
            self._half_multipliers[dt] = multiplier
        return multiplier

    def substeps_for(self, u: np.ndarray, dt: float, max_phase: Optional[float]) -> int:
        """Number of substeps keeping the phase rotation per substep below max_phase."""
        if not self.nonlinear or max_phase is None:
            return 1
        peak = float(np.max(np.abs(u), initial=0.0)) ** self.alpha
        if not math.isfinite(peak):
            return 1
        return max(1, math.ceil(dt * peak / max_phase))

    def step(
        self,
        u: np.ndarray,
        dt: float,
        t: float = 0.0,
        forcing: Optional[Forcing] = None,
    ) -> np.ndarray:
        """One Strang step of length dt starting at time t."""
        half = self.half_multiplier(dt)
        u = scipy.fft.ifftn(scipy.fft.fftn(u) * half)
        if self.nonlinear:
            u = u * np.exp(1j * dt * np.abs(u) ** self.alpha)
        if forcing is not None:
            u = u - 1j * dt * forcing(t + 0.5 * dt, self.grid)
        return scipy.fft.ifftn(scipy.fft.fftn(u) * half)

    def advance(
        self,
        u: np.ndarray,
        dt: float,
        substeps: int,
        t: float = 0.0,
        forcing: Optional[Forcing] = None,
    ) -> np.ndarray:
        """
        Advance by dt in ``substeps`` equal Strang steps.

        Raises:
            NonFiniteField: If a sample becomes NaN or infinite
        """
        h = dt / substeps
        for k in range(substeps):
            u = self.step(u, h, t + k * h, forcing)
        if not np.all(np.isfinite(u)):
            raise NonFiniteField(f"Field became non-finite near t = {t + dt:.6g}", time=t + dt)
        return u


@dataclass(frozen=True)
class ScatteringReport:
    """
    Scattering diagnostics on checkpoint fields.

    Attributes:
        times: Checkpoint times
        pairwise: H^1 distances |v(t_i) - v(t_j)| of the backward-propagated profiles
        successive: Distances between consecutive profiles
        decay: |u(t)|_{L^{p+1}} at each checkpoint
        accumulation: Running integral of |u|_{L^r}^a (trapezoid on checkpoints)
        interpolation_lhs: |u|_{L^a L^r} on the window
        interpolation_rhs: |u|_{L^inf H^1}^{(a-gamma)/a} |u|_{L^gamma L^gamma}^{gamma/a}
    """
    times: Tuple[float, ...]
    pairwise: np.ndarray
    successive: Tuple[float, ...]
    decay: Tuple[float, ...]
    accumulation: Tuple[float, ...]
    interpolation_lhs: float
    interpolation_rhs: float

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "times": list(self.times),
            "successive": list(self.successive),
            "decay": list(self.decay),
            "accumulation": list(self.accumulation),
            "interpolationLhs": self.interpolation_lhs,
            "interpolationRhs": self.interpolation_rhs,
        }


@dataclass(frozen=True)
class WaveOperatorReport:
    """
    Approximate wave operator at a scattering state psi.

    Attributes:
        u0: Data at t = 0 whose forward flow matches e^{it Lap} psi near t = -T
        well: Well status of u0
        energy: E(u0)
        half_grad: |grad psi|^2 / 2, the limit of E(u(-t))
        residual: |Sol(-T) u0 - e^{-iT Lap} psi|_{H^1}
        mass_u0: M(u0)
        mass_psi: M(psi)
        classification: Classification of the forward run
    """
    u0: FieldState
    well: WellStatus
    energy: float
    half_grad: float
    residual: float
    mass_u0: float
    mass_psi: float
    classification: Optional[Classification]

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "well": self.well.to_dict(),
            "energy": self.energy,
            "halfGrad": self.half_grad,
            "residual": self.residual,
            "massU0": self.mass_u0,
            "massPsi": self.mass_psi,
            "classification": self.classification.value if self.classification else None,
        }


@dataclass(frozen=True)
class PerturbationReport:
    """
    Stability of the flow against data and forcing perturbations.

    Attributes:
        difference_norm: |u - u_tilde|_{L^a L^r} over the window
        data_norm: |e^{it Lap}(u0 - u_tilde0)|_{L^a L^r}
        forcing_norm: |e|_{L^{b'} L^{r'}}
        final_h1: |u - u_tilde|_{H^1} at the final time
        steps: Base steps taken
    """
    difference_norm: float
    data_norm: float
    forcing_norm: float
    final_h1: float
    steps: int

    @property
    def epsilon(self) -> float:
        return self.data_norm + self.forcing_norm

    @property
    def ratio(self) -> float:
        """difference_norm / epsilon, 0 when both inputs vanish."""
        return self.difference_norm / self.epsilon if self.epsilon > 0 else 0.0

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "differenceNorm": self.difference_norm,
            "dataNorm": self.data_norm,
            "forcingNorm": self.forcing_norm,
            "epsilon": self.epsilon,
            "ratio": self.ratio,
            "finalH1": self.final_h1,
            "steps": self.steps,
        }


class EvolutionService:
    """
    Evolution of i u_t + Lap u + |u|^{p-1} u = 0 on a periodic box.

    The inner loop runs on raw arrays; FieldState objects are only built
    at checkpoints and at the end of a run.
    """

    # Substep count beyond which a run is stopped as blowing up
    MAX_SUBSTEPS = 10000
    PROGRESS_SLICES = 10

    def __init__(self, exps: ExponentSet, thresholds: QNorms):
        self.exps = exps
        self.thresholds = thresholds
        self._p = float(exps.p)
        self._r = float(exps.r)
        self._a = float(exps.a)

    # ========== Conserved quantities ==========

    def conserved(self, field: FieldState) -> FieldStats:
        """Mass, energy and momentum, with gradients taken on the spectrum."""
        return self._stats(field.grid, field.values, scipy.fft.fftn(field.values))

    def _stats(self, grid: GridSpec, u: np.ndarray, spectrum: np.ndarray) -> FieldStats:
        weight = grid.cell_volume / u.size
        power = np.abs(spectrum) ** 2
        return FieldStats.from_norms(
            mass=float(np.sum(power) * weight),
            grad2=float(np.sum(power * grid.k2) * weight),
            pot=float(np.sum(np.abs(u) ** self._r) * grid.cell_volume),
            p=self._p,
            momentum=tuple(float(np.sum(k * power) * weight) for k in grid.derivative_wavevectors),
        )

    def _lr_norm(self, grid: GridSpec, u: np.ndarray) -> float:
        return float((np.sum(np.abs(u) ** self._r) * grid.cell_volume) ** (1.0 / self._r))

    def well_status(self, stats: FieldStats) -> WellStatus:
        return WellCalculator.well_membership(stats, self.thresholds, self.exps)

    def strang_step(self, field: FieldState, dt: float, nonlinear: bool = True) -> FieldState:
        """
        One Strang step of length dt.

        Raises:
            ValueError: If dt is not positive
            NonFiniteField: If the step produces non-finite samples
        """
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        integrator = SplitStepIntegrator(field.grid, self._p, nonlinear)
        values = integrator.advance(field.values, dt, 1, field.time)
        return field.replace(values, time=field.time + dt)

    # ========== Evolution ==========

    def evolve(
        self,
        field: FieldState,
        controls: EvolveControls,
        weights: Optional[VirialWeights] = None,
    ) -> TrajectoryRecord:
        """
        Evolve until t_end or until a guard fires.

        Args:
            field: Initial data; its time is the start time
            controls: Step size, cadence and guard settings
            weights: Virial weights; when given a VirialSample is stored per checkpoint

        Returns:
            Finished TrajectoryRecord with exactly one terminal event
        """
        grid = field.grid
        integrator = SplitStepIntegrator(grid, self._p, controls.nonlinear)
        t0 = field.time
        spectrum = scipy.fft.fftn(field.values)
        stats0 = self._stats(grid, field.values, spectrum)
        record = TrajectoryRecord(initial_well=self.well_status(stats0))

        grad_limit = controls.blowup_gradient_factor * math.sqrt(stats0.grad2)
        if grad_limit == 0.0:
            grad_limit = math.inf
        tail_mask = grid.k_abs > SpectralCalculus.TAIL_START * grid.k_max

        u = field.values.copy()
        lr = self._lr_norm(grid, u)
        accumulated = 0.0
        inside_throughout = record.initial_well.inside
        self._record_checkpoint(record, field, spectrum, lr, accumulated, controls, weights)

        n_steps = controls.n_steps
        progress_every = max(n_steps // self.PROGRESS_SLICES, 1)
        logger.info(
            "Evolving N=%d p=%s on %d^%d nodes: %d steps of dt=%g (initial %s)",
            grid.N, self.exps.p, grid.points, grid.N, n_steps, controls.dt,
            record.initial_well.verdict.value,
        )

        t = t0
        event: Optional[RunEvent] = None
        classification = Classification.UNDECIDED
        for step in range(1, n_steps + 1):
            substeps = integrator.substeps_for(u, controls.dt, controls.max_phase)
            if substeps > self.MAX_SUBSTEPS:
                event = RunEvent(RunEventKind.BLOW_UP_GUARD, t, {
                    "reason": "phaseCap",
                    "substeps": substeps,
                    "maxModulus": float(np.max(np.abs(u))),
                })
                classification = Classification.BLOW_UP_DETECTED
                break
            try:
                u_next = integrator.advance(u, controls.dt, substeps, t)
            except NonFiniteField as exc:
                event = RunEvent(RunEventKind.BLOW_UP_GUARD, exc.time, {
                    "reason": "nonFinite",
                    "maxModulus": float(np.max(np.abs(u))),
                })
                classification = Classification.BLOW_UP_DETECTED
                break

            u = u_next
            t = t0 + step * controls.dt
            record.steps = step
            record.substeps += substeps

            spectrum = scipy.fft.fftn(u)
            density = np.abs(spectrum) ** 2 * grid.k2
            grad_total = float(np.sum(density))
            grad_norm = math.sqrt(grad_total * grid.cell_volume / u.size)
            tail = float(np.sum(density[tail_mask])) / grad_total if grad_total > 0 else 0.0

            lr_next = self._lr_norm(grid, u)
            accumulated += 0.5 * controls.dt * (lr ** self._a + lr_next ** self._a)
            lr = lr_next

            if grad_norm >= grad_limit:
                event = RunEvent(RunEventKind.BLOW_UP_GUARD, t, {
                    "reason": "gradient",
                    "gradNorm": grad_norm,
                    "factor": grad_norm / (grad_limit / controls.blowup_gradient_factor),
                })
                classification = Classification.BLOW_UP_DETECTED
                break
            if tail > controls.resolution_fraction:
                event = RunEvent(RunEventKind.RESOLUTION_LOSS, t, {
                    "tailFraction": tail,
                    "gradNorm": grad_norm,
                })
                classification = Classification.UNDECIDED
                break

            if step % controls.checkpoint_every == 0:
                checkpoint = self._record_checkpoint(
                    record, FieldState(grid, u, t), spectrum, lr, accumulated, controls, weights
                )
                inside_throughout = inside_throughout and checkpoint.well.inside
            if step % progress_every == 0:
                logger.debug("t=%.4g |grad u|=%.6g substeps=%d", t, grad_norm, substeps)

        if event is None:
            event = RunEvent(RunEventKind.COMPLETED, t, {})
            if inside_throughout:
                classification = Classification.GLOBAL_IN_WELL
        else:
            logger.warning(
                "Run stopped at t=%.6g: %s %s", event.time, event.kind.value, event.detail
            )

        record.final_field = FieldState(grid, u, t)
        record.finish(event, classification)
        logger.info("Run finished at t=%.6g: %s", t, classification.value)
        return record

    def _record_checkpoint(
        self,
        record: TrajectoryRecord,
        field: FieldState,
        spectrum: np.ndarray,
        lr: float,
        accumulated: float,
        controls: EvolveControls,
        weights: Optional[VirialWeights],
    ) -> Checkpoint:
        grid = field.grid
        stats = self._stats(grid, field.values, spectrum)
        density = np.abs(spectrum) ** 2 * grid.k2
        total = float(np.sum(density))
        tail_mask = grid.k_abs > SpectralCalculus.TAIL_START * grid.k_max
        checkpoint = Checkpoint(
            t=field.time,
            stats=stats,
            grad_product=WellCalculator.grad_product(stats, self.exps),
            well=self.well_status(stats),
            lr_norm=lr,
            accumulated=accumulated,
            tail_fraction=float(np.sum(density[tail_mask])) / total if total > 0 else 0.0,
        )
        record.add_checkpoint(checkpoint)
        if weights is not None:
            record.virial.append(
                VirialCalculator.sample_virial(field, weights, self.exps, controls.nonlinear)
            )
        if controls.keep_fields:
            record.snapshots.append(field.copy())
        return checkpoint

    # ========== Scattering diagnostics ==========

    def scattering_diagnostic(self, fields: Sequence[FieldState]) -> ScatteringReport:
        """
        Pull checkpoint fields back with the free flow and compare them.

        Args:
            fields: Checkpoint fields in increasing time order

        Returns:
            ScatteringReport

        Raises:
            InsufficientCheckpoints: With fewer than three fields
        """
        if len(fields) < 3:
            raise InsufficientCheckpoints(
                f"Scattering diagnostic needs at least 3 checkpoints, got {len(fields)}"
            )
        profiles = [SpectralCalculus.free_propagate(f, -f.time) for f in fields]
        n = len(profiles)
        pairwise = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                gap = profiles[i].replace(profiles[i].values - profiles[j].values)
                pairwise[i, j] = pairwise[j, i] = SpectralCalculus.h1_norm(gap)
        successive = tuple(float(pairwise[i, i + 1]) for i in range(n - 1))

        times = np.array([f.time for f in fields])
        gamma = float(self.exps.gamma)
        decay = np.array([SpectralCalculus.lebesgue_norm(f, self._r) for f in fields])
        lr_powers = decay ** self._a
        steps = np.diff(times)
        trapezoids = 0.5 * steps * (lr_powers[1:] + lr_powers[:-1])
        accumulation = np.concatenate(([0.0], np.cumsum(trapezoids)))

        gamma_powers = np.array([SpectralCalculus.lebesgue_norm(f, gamma) ** gamma for f in fields])
        gamma_integral = float(np.sum(0.5 * steps * (gamma_powers[1:] + gamma_powers[:-1])))
        h1_sup = max(SpectralCalculus.h1_norm(f) for f in fields)
        lhs = float(accumulation[-1]) ** (1.0 / self._a)
        rhs = h1_sup ** ((self._a - gamma) / self._a) * gamma_integral ** (1.0 / self._a)

        return ScatteringReport(
            times=tuple(float(t) for t in times),
            pairwise=pairwise,
            successive=successive,
            decay=tuple(float(d) for d in decay),
            accumulation=tuple(float(x) for x in accumulation),
            interpolation_lhs=lhs,
            interpolation_rhs=float(rhs),
        )

    def wave_operator_approx(
        self,
        psi: FieldState,
        T: float,
        controls: EvolveControls,
        omega: float = 0.5,
        dispersal_fraction: float = 0.5,
    ) -> WaveOperatorReport:
        """
        Construct u0 whose solution behaves like e^{it Lap} psi as t -> -inf.

        Sets u(-T) = e^{-iT Lap} psi and evolves it forward to t = 0.

        Args:
            psi: Scattering state
            T: Backward horizon
            controls: Step settings (t_end is replaced by T)
            omega: Energy level; psi must satisfy
                |grad psi|^2 M(psi)^sigma / 2 <= omega E(Q) M(Q)^sigma
            dispersal_fraction: Required ratio |e^{-iT Lap} psi|_{L^{p+1}} / |psi|_{L^{p+1}}

        Raises:
            PreconditionViolated: If psi carries too much kinetic energy for omega
            DispersalInsufficient: If T is too short for the free flow to disperse psi
        """
        if T <= 0:
            raise PreconditionViolated(f"Backward horizon must be positive, got {T}")
        psi_stats = self.conserved(psi)
        level = 0.5 * psi_stats.grad2 * psi_stats.mass ** float(self.exps.sigma)
        if level > omega * self.thresholds.thr_energy:
            raise PreconditionViolated(
                f"|grad psi|^2 M^sigma / 2 = {level:.6g} exceeds "
                f"{omega} * E(Q)M(Q)^sigma = {omega * self.thresholds.thr_energy:.6g}"
            )

        start = SpectralCalculus.free_propagate(psi.replace(psi.values, time=0.0), -T)
        start = start.replace(start.values, time=-T)
        psi_lr = SpectralCalculus.lebesgue_norm(psi, self._r)
        start_lr = SpectralCalculus.lebesgue_norm(start, self._r)
        if start_lr > dispersal_fraction * psi_lr:
            raise DispersalInsufficient(
                f"|e^(-iT Lap) psi|_(L^{self._r:g}) = {start_lr:.6g} is above "
                f"{dispersal_fraction} * {psi_lr:.6g}; increase T"
            )

        run_controls = replace(controls, t_end=T, keep_fields=False)
        forward = self.evolve(start, run_controls)
        u0 = forward.final_field.replace(forward.final_field.values, time=0.0)

        backward = self.evolve(self.time_reverse(u0), run_controls)
        returned = self.time_reverse(backward.final_field)
        residual = SpectralCalculus.h1_norm(start.replace(returned.values - start.values))

        u0_stats = self.conserved(u0)
        return WaveOperatorReport(
            u0=u0,
            well=self.well_status(u0_stats),
            energy=u0_stats.energy,
            half_grad=0.5 * psi_stats.grad2,
            residual=residual,
            mass_u0=u0_stats.mass,
            mass_psi=psi_stats.mass,
            classification=forward.classification,
        )

    def perturbation_experiment(
        self,
        u0: FieldState,
        u0_tilde: FieldState,
        controls: EvolveControls,
        forcing: Optional[Forcing] = None,
    ) -> PerturbationReport:
        """
        Evolve u0 under the equation and u0_tilde under the forced equation in lockstep.

        Both runs use the same substep counts, so the difference only
        reflects the data and the forcing.
        """
        grid = u0.grid
        integrator = SplitStepIntegrator(grid, self._p, controls.nonlinear)
        dt = controls.dt
        r_dual = self._r / (self._r - 1.0)
        b = float(self.exps.b)
        b_dual = b / (b - 1.0)

        u = u0.values.copy()
        v = u0_tilde.values.copy()
        gap_spectrum = scipy.fft.fftn(u - v)

        def lr(values: np.ndarray) -> float:
            return self._lr_norm(grid, values)

        def forcing_norm(t: float) -> float:
            if forcing is None:
                return 0.0
            values = np.abs(forcing(t, grid))
            return float((np.sum(values ** r_dual) * grid.cell_volume) ** (1.0 / r_dual))

        diff_prev = lr(u - v) ** self._a
        data_prev = diff_prev
        force_prev = forcing_norm(u0.time) ** b_dual
        diff_acc = data_acc = force_acc = 0.0
        t = u0.time

        n_steps = controls.n_steps
        for step in range(1, n_steps + 1):
            substeps = max(
                integrator.substeps_for(u, dt, controls.max_phase),
                integrator.substeps_for(v, dt, controls.max_phase),
            )
            u = integrator.advance(u, dt, substeps, t)
            v = integrator.advance(v, dt, substeps, t, forcing)
            t = u0.time + step * dt

            free_gap = scipy.fft.ifftn(gap_spectrum * np.exp(-1j * (t - u0.time) * grid.k2))
            diff_next = lr(u - v) ** self._a
            data_next = lr(free_gap) ** self._a
            force_next = forcing_norm(t) ** b_dual
            diff_acc += 0.5 * dt * (diff_prev + diff_next)
            data_acc += 0.5 * dt * (data_prev + data_next)
            force_acc += 0.5 * dt * (force_prev + force_next)
            diff_prev, data_prev, force_prev = diff_next, data_next, force_next

        final_gap = FieldState(grid, u - v, t)
        return PerturbationReport(
            difference_norm=diff_acc ** (1.0 / self._a),
            data_norm=data_acc ** (1.0 / self._a),
            forcing_norm=force_acc ** (1.0 / b_dual),
            final_h1=SpectralCalculus.h1_norm(final_gap),
            steps=n_steps,
        )

    # ========== Symmetries ==========

    def galilean_boost(self, field: FieldState) -> FieldState:
        """
        Remove the momentum: e^{i x.y0} u with y0 = -P(u)/M(u).

        Raises:
            ZeroMass: For the zero field
        """
        stats = self.conserved(field)
        if stats.mass == 0.0:
            raise ZeroMass("Galilean boost is undefined for a field of zero mass")
        shift = [-m / stats.mass for m in stats.momentum]
        phase = sum(y * x for y, x in zip(shift, field.grid.coordinates))
        return field.replace(field.values * np.exp(1j * phase))

    @staticmethod
    def time_reverse(field: FieldState) -> FieldState:
        """conj(u), with the clock mirrored to -t."""
        return field.replace(np.conj(field.values), time=-field.time)

