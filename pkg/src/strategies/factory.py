"""
Factory for selecting the initial-data family by name.
"""
from typing import Dict, List

from src.core.exceptions import ValidationError
from src.strategies.base import InitialDataStrategy
from src.strategies.file_field import FileFieldStrategy
from src.strategies.gaussian import GaussianStrategy
from src.strategies.ground_state import DilatedGroundStateStrategy, ScaledGroundStateStrategy


class InitialDataFactory:
    """
    Registry of initial-data strategies keyed by family name.

    Ground-state families share the store they solve and cache Q through.
    """

    def __init__(self, ground_states):
        """Initialize with the built-in families."""
        self._strategies: Dict[str, InitialDataStrategy] = {}
        for strategy in (
            ScaledGroundStateStrategy(ground_states),
            DilatedGroundStateStrategy(ground_states),
            GaussianStrategy(),
            FileFieldStrategy(),
        ):
            self.register_strategy(strategy)

    def get_strategy(self, family: str) -> InitialDataStrategy:
        """
        Get the strategy registered under a family name.

        Raises:
            ValidationError: If the family is unknown
        """
        strategy = self._strategies.get(family)
        if strategy is None:
            known = ", ".join(sorted(self._strategies))
            raise ValidationError(f"Unknown initial-data family '{family}' (known: {known})")
        return strategy

    def families(self) -> List[str]:
        return sorted(self._strategies)

    def register_strategy(self, strategy: InitialDataStrategy) -> None:
        """Register a strategy, replacing any previous one with the same name."""
        self._strategies[strategy.family_name] = strategy
