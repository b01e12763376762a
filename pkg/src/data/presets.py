"""
Reference cases and default experiment parameters.
"""
from typing import Dict, Tuple

# (N, p) covering one, two and three dimensions
REFERENCE_CASES: Tuple[Tuple[int, int], ...] = ((1, 7), (2, 5), (3, 3))

INSIDE_LAMBDAS: Tuple[float, ...] = (0.5, 0.7, 0.9)
BLOWUP_LAMBDAS: Tuple[float, ...] = (1.1, 1.3, 1.5)
DEFAULT_SWEEP_LAMBDAS: Tuple[float, ...] = INSIDE_LAMBDAS + BLOWUP_LAMBDAS

# Grids (extent, points) the desk-scale experiments are calibrated on
REFERENCE_GRIDS: Dict[str, Tuple[float, int]] = {
    "dichotomy": (16.0, 4096),
    "conservation": (20.0, 2048),
    "standingWave": (20.0, 1024),
    "freeGaussian": (40.0, 1024),
    "cutoff": (16.0, 256),
}

SELFTEST_SUITES: Tuple[str, ...] = (
    "pohozaev",
    "gn",
    "cutoff",
    "gronwall",
    "conservation",
    "virial",
)
