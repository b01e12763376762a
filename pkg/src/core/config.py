"""
Run configuration: dotenv-style key-value files or JSON manifests, plus CLI overrides.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError
from pydantic import field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from src.core.exceptions import ConfigError
from src.data.presets import DEFAULT_SWEEP_LAMBDAS, SELFTEST_SUITES
from src.entities.exponents import as_fraction
from src.entities.profile import ShootingOptions
from src.entities.trajectory import EvolveControls
from src.strategies.base import InitialDataRequest

Experiment = Literal[
    "exponents",
    "groundstate",
    "classify",
    "evolve",
    "sweep",
    "virial",
    "selftest",
    "gronwall-selftest",
    "cutoff-selftest",
]


# ========== SECTIONS ==========

class GridConfig(BaseModel):
    """Periodic box [-extent, extent)^N."""
    model_config = ConfigDict(extra="forbid")

    extent: float = Field(16.0, gt=0, description="Box half-width L")
    points: int = Field(4096, ge=8, description="Samples per axis, a power of two")


class ControlsConfig(BaseModel):
    """Time stepping and guards."""
    model_config = ConfigDict(extra="forbid")

    dt: float = Field(1e-4, gt=0, description="Base time step")
    t_end: float = Field(1.0, ge=0, description="Final time")
    checkpoint_every: int = Field(100, ge=1, description="Base steps between checkpoints")
    blowup_gradient_factor: float = Field(
        10.0, gt=1, description="Gradient growth factor that counts as blow-up"
    )
    resolution_fraction: float = Field(
        1e-3, gt=0, lt=1, description="Admissible share of |grad u|^2 in the spectral tail"
    )
    max_phase: Optional[float] = Field(
        0.05, gt=0, description="Largest nonlinear phase per substep (null disables subdivision)"
    )
    keep_fields: bool = Field(
        False, description="Store checkpoint fields for the scattering diagnostic"
    )

    def to_controls(self) -> EvolveControls:
        return EvolveControls(
            dt=self.dt,
            t_end=self.t_end,
            checkpoint_every=self.checkpoint_every,
            blowup_gradient_factor=self.blowup_gradient_factor,
            resolution_fraction=self.resolution_fraction,
            max_phase=self.max_phase,
            keep_fields=self.keep_fields,
        )


class GroundStateConfig(BaseModel):
    """Shooting solver settings."""
    model_config = ConfigDict(extra="forbid")

    r_max: float = Field(20.0, gt=0, description="Truncation radius")
    mesh_points: int = Field(4001, ge=5, description="Output mesh nodes")
    tolerance: float = Field(1e-15, gt=0, lt=1, description="Relative bracket width on Q(0)")
    max_iterations: int = Field(200, ge=1, description="Bisection cap")
    cache: bool = Field(True, description="Cache solved profiles in the output directory")

    def to_options(self) -> ShootingOptions:
        return ShootingOptions(
            r_max=self.r_max,
            mesh_points=self.mesh_points,
            tolerance=self.tolerance,
            max_iterations=self.max_iterations,
        )


class InitialDataConfig(BaseModel):
    """Initial-data family and its parameters."""
    model_config = ConfigDict(extra="forbid")

    family: str = Field("scaledQ", description="scaledQ, dilatedQ, gaussian or file")
    lam: float = Field(0.9, ge=0, description="Family parameter lambda")
    amplitude: float = Field(1.0, description="Gaussian amplitude")
    width: float = Field(1.0, gt=0, description="Gaussian width")
    center: List[float] = Field(default_factory=list, description="Gaussian center")
    kick: List[float] = Field(default_factory=list, description="Momentum kick")
    path: Optional[str] = Field(None, description="Field binary for the file family")

    def to_request(self, lam: Optional[float] = None) -> InitialDataRequest:
        return InitialDataRequest(
            family=self.family,
            lam=self.lam if lam is None else lam,
            amplitude=self.amplitude,
            width=self.width,
            center=tuple(self.center),
            kick=tuple(self.kick),
            path=self.path,
        )


class SweepConfig(BaseModel):
    """Lambda sweep of an initial-data family."""
    model_config = ConfigDict(extra="forbid")

    lambdas: List[float] = Field(
        default_factory=lambda: list(DEFAULT_SWEEP_LAMBDAS), description="Lambda values, in order"
    )


class VirialConfig(BaseModel):
    """Localized virial settings."""
    model_config = ConfigDict(extra="forbid")

    radius: Optional[float] = Field(
        None, gt=0, description="Localization radius R (null: automatic)"
    )
    radius_factor: float = Field(
        4.0, gt=0, description="Automatic R as this multiple of the 99% mass radius"
    )


class SelftestConfig(BaseModel):
    """Property suites."""
    model_config = ConfigDict(extra="forbid")

    suites: List[str] = Field(
        default_factory=lambda: list(SELFTEST_SUITES), description="Suites to run"
    )
    gronwall_instances: int = Field(100, ge=1, description="Random Gronwall instances")
    cutoff_fields: int = Field(200, ge=1, description="Random band-limited fields")
    gn_fields: int = Field(100, ge=1, description="Random fields for the GN inequality")
    corrupt_norms: bool = Field(False, description="Fault injection: perturb the ground-state mass")

    @field_validator("suites")
    @classmethod
    def known_suites(cls, value: List[str]) -> List[str]:
        unknown = sorted(set(value) - set(SELFTEST_SUITES))
        if unknown:
            raise ValueError(f"Unknown suites {unknown}; known: {list(SELFTEST_SUITES)}")
        return value


# ========== RUN CONFIG ==========

class RunConfig(BaseSettings):
    """
    Complete description of a run.

    Read from explicit values (CLI overrides) and a dotenv-style file
    only; the process environment is never consulted.
    """
    model_config = SettingsConfigDict(
        env_nested_delimiter="__",
        extra="forbid",
        env_file=None,
    )

    N: int = Field(1, ge=1, le=3, description="Spatial dimension")
    p: str = Field("7", description="Nonlinearity power, exact rational such as 7 or 7/3")
    experiment: Experiment = Field("classify", description="Experiment the run performs")
    seed: int = Field(0, description="Seed of the randomized suites")
    output_dir: str = Field("runs", description="Run directory")
    jobs: int = Field(1, ge=1, description="Worker processes for sweeps")
    save_field: bool = Field(False, description="Write the terminal field of evolve runs")
    grid: GridConfig = Field(default_factory=GridConfig)
    controls: ControlsConfig = Field(default_factory=ControlsConfig)
    ground_state: GroundStateConfig = Field(default_factory=GroundStateConfig)
    initial: InitialDataConfig = Field(default_factory=InitialDataConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    virial: VirialConfig = Field(default_factory=VirialConfig)
    selftest: SelftestConfig = Field(default_factory=SelftestConfig)

    @field_validator("p", mode="before")
    @classmethod
    def exact_power(cls, value: Any) -> str:
        try:
            return str(as_fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"Cannot read power {value!r} as a rational number")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings, dotenv_settings)

    def snapshot(self) -> Dict[str, Any]:
        """Plain-JSON view used in manifests."""
        return self.model_dump(mode="json")


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(
    path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """
    Build a RunConfig from a file and overrides.

    Args:
        path: dotenv-style key=value file, or a JSON manifest whose config
            snapshot is replayed
        overrides: Nested values taking precedence over the file

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: If the file is missing or unreadable, or a key is unknown or invalid
    """
    overrides = overrides or {}
    try:
        if path is None:
            return RunConfig(_env_file=None, **overrides)
        source = Path(path)
        if not source.is_file():
            raise ConfigError(f"Config file not found: {source}")
        if source.suffix == ".json":
            try:
                snapshot = json.loads(source.read_text())["config"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ConfigError(f"{source} is not a run manifest: {exc}")
            return RunConfig(_env_file=None, **_merge(snapshot, overrides))
        return RunConfig(_env_file=source, **overrides)
    except PydanticValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
            for error in exc.errors()
        )
        raise ConfigError(f"Invalid configuration: {problems}")
