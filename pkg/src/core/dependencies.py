"""
Dependency container for the CLI.

This module provides singleton instances of repositories and services,
built from the run configuration on first use.
"""
from dataclasses import dataclass
from pathlib import Path

from src.core.config import RunConfig
from src.repositories import GroundStateRepository, RunRepository
from src.services.selftest_service import SelftestService
from src.services.sweep_service import SweepService
from src.strategies.factory import InitialDataFactory

CACHE_DIR = "cache"


@dataclass
class Repositories:
    """Container for all repository instances."""
    ground_states: GroundStateRepository
    runs: RunRepository


@dataclass
class Services:
    """Container for all service instances."""
    initial_data: InitialDataFactory
    sweep: SweepService
    selftest: SelftestService


# Singleton instances
_repositories: Repositories | None = None
_services: Services | None = None


def get_repositories(config: RunConfig) -> Repositories:
    """
    Get the singleton Repositories instance.

    The ground-state store caches profiles under <output_dir>/cache when
    caching is enabled; the run writer targets <output_dir>.

    Returns:
        Repositories container with all repository instances
    """
    global _repositories

    if _repositories is None:
        out_dir = Path(config.output_dir)
        cache_dir = out_dir / CACHE_DIR if config.ground_state.cache else None
        _repositories = Repositories(
            ground_states=GroundStateRepository(
                options=config.ground_state.to_options(), cache_dir=cache_dir
            ),
            runs=RunRepository(out_dir),
        )

    return _repositories


def get_services(config: RunConfig) -> Services:
    """
    Get the singleton Services instance.

    Returns:
        Services container with all service instances
    """
    global _services

    if _services is None:
        repos = get_repositories(config)
        selftest = config.selftest
        _services = Services(
            initial_data=InitialDataFactory(repos.ground_states),
            sweep=SweepService(repos.ground_states),
            selftest=SelftestService(
                repos.ground_states,
                seed=config.seed,
                gronwall_instances=selftest.gronwall_instances,
                cutoff_fields=selftest.cutoff_fields,
                gn_fields=selftest.gn_fields,
                corrupt_norms=selftest.corrupt_norms,
            ),
        )

    return _services


def reset_dependencies() -> None:
    """Reset all singleton instances. Useful for testing."""
    global _repositories, _services
    _repositories = None
    _services = None
