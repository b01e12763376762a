"""
Pydantic records for the JSON files a run emits.

These schemas provide:
- Validation of what the commands write
- Field descriptions that double as format documentation
- Deterministic serialization (timing lives in the manifest only)
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


# ========== MANIFEST SCHEMAS ==========

class SolverTolerances(BaseModel):
    """Tolerances every verdict of the run depends on."""
    groundStateTolerance: float = Field(..., description="Relative bracket width on Q(0)")
    boundaryBand: float = Field(..., description="Band around 1 read as the well boundary")
    resolutionFraction: float = Field(..., description="Admissible spectral-tail share")
    blowupGradientFactor: float = Field(..., description="Gradient growth read as blow-up")


class Timing(BaseModel):
    """Wall-clock information; the only nondeterministic part of a run."""
    startedAt: str = Field(..., description="UTC start time, ISO 8601")
    wallSeconds: float = Field(..., description="Elapsed wall time")


class RunManifest(BaseModel):
    """Everything needed to replay and audit a run."""
    tool: str = Field("nls-atlas", description="Producer")
    version: str = Field(..., description="Producer version")
    experiment: str = Field(..., description="Verb that produced the run")
    seed: int = Field(..., description="Seed of the randomized suites")
    config: Dict[str, Any] = Field(..., description="Full configuration snapshot")
    exponents: Optional[Dict[str, Any]] = Field(None, description="Exponent set, exact rationals")
    thresholds: Optional[Dict[str, float]] = Field(None, description="Ground-state norms used")
    tolerances: SolverTolerances = Field(..., description="Solver and verdict tolerances")
    steps: int = Field(0, description="Base time steps taken over the whole run")
    timing: Timing = Field(..., description="Wall-clock record")


# ========== RESULT SCHEMAS ==========

class GroundStateResult(BaseModel):
    """Solved ground state with its norms and identity residuals."""
    profile: Dict[str, Any] = Field(..., description="Profile metadata")
    norms: Dict[str, float] = Field(..., description="Norms and well thresholds")
    pohozaevResiduals: List[float] = Field(..., description="Relative residual per identity")
    gnConstantDirect: float = Field(..., description="GN constant from the quotient at Q")
    gnConstantIdentity: float = Field(..., description="GN constant from the threshold identity")


class ClassifyResult(BaseModel):
    """Well verdict of one initial datum."""
    initialData: Dict[str, Any] = Field(..., description="Family and parameters")
    stats: Dict[str, Any] = Field(..., description="Statistics the verdict is based on")
    statsSource: str = Field(..., description="'exact' for closed forms, 'grid' when sampled")
    well: Dict[str, Any] = Field(..., description="omega, gradRatio and verdict")
    energyBounds: Optional[Dict[str, Any]] = Field(
        None, description="Energy inequalities, present below the gradient threshold"
    )
    coercivityConstant: Optional[float] = Field(
        None, description="8(1 - omega^((N(p-1)-4)/4)) for data inside the well"
    )
    galileanReduction: Optional[float] = Field(
        None, description="|P|^2/M removed from |grad u|^2 by the boost; null without momentum"
    )


class EvolveResult(BaseModel):
    """Summary of an evolution run."""
    initialData: Dict[str, Any] = Field(..., description="Family and parameters")
    grid: Dict[str, Any] = Field(..., description="Grid")
    controls: Dict[str, Any] = Field(..., description="Time-stepping controls")
    trajectory: Dict[str, Any] = Field(..., description="Classification, events and counts")
    scattering: Optional[Dict[str, Any]] = Field(
        None, description="Cauchy diagnostic of the pulled-back checkpoint fields"
    )
    galileanReduction: Optional[float] = Field(
        None, description="Measured drop of |grad u|^2 under the boost; null without momentum"
    )


class VirialResult(BaseModel):
    """Localized virial checks of one run."""
    radius: float = Field(..., description="Localization radius R")
    effectiveRadius: float = Field(..., description="Radius holding 99% of the initial mass")
    trajectory: Dict[str, Any] = Field(..., description="Classification, events and counts")
    fdCrosscheck: Optional[Dict[str, Any]] = Field(
        None, description="Finite differences against the analytic derivatives"
    )
    coercivity: Optional[Dict[str, Any]] = Field(
        None, description="ZR'' >= 2 eta E(u0), claimed for data inside the well only"
    )
    varianceRateBound: List[float] = Field(..., description="(C, C R |u|_2 |grad u|_2)")


# ========== ERROR SCHEMAS ==========

class ErrorRecord(BaseModel):
    """Standard error report printed on failure."""
    error: str = Field(..., description="Error type")
    message: str = Field(..., description="Error message")
    exitCode: int = Field(..., description="Process exit status")
