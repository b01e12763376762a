"""
Pytest configuration and fixtures.
"""
import pytest

from src.core.dependencies import reset_dependencies
from src.data.presets import REFERENCE_CASES
from src.repositories import GroundStateRepository
from src.services.well_calculator import WellCalculator


@pytest.fixture(autouse=True)
def fresh_dependencies():
    """
    Reset the dependency container around every test.

    The CLI builds its repositories from the run configuration, so each
    test must start without a previous test's singletons.
    """
    reset_dependencies()
    yield
    reset_dependencies()


@pytest.fixture(scope="session")
def ground_states():
    """Session-wide ground-state store; each (N, p) is solved once."""
    return GroundStateRepository()


@pytest.fixture(scope="session")
def reference_cases(ground_states):
    """(exps, entry) for the one-, two- and three-dimensional reference cases."""
    cases = {}
    for N, p in REFERENCE_CASES:
        exps = WellCalculator.derive_exponents(N, p)
        cases[N] = (exps, ground_states.get_or_solve(exps))
    return cases


@pytest.fixture(scope="session")
def case_1d(reference_cases):
    """N = 1, p = 7."""
    return reference_cases[1]


@pytest.fixture(scope="session")
def exps_1d(case_1d):
    return case_1d[0]


@pytest.fixture(scope="session")
def norms_1d(case_1d):
    return case_1d[1].norms
