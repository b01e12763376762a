"""
Base repository: keyed in-memory store.
"""
from abc import ABC, abstractmethod
from typing import Dict, Generic, Hashable, List, Optional, TypeVar

T = TypeVar('T')


class BaseRepository(ABC, Generic[T]):
    """
    Abstract keyed store.

    Subclasses say how an entity is keyed and may add persistence
    behind the same interface.
    """

    def __init__(self):
        self._store: Dict[Hashable, T] = {}

    @abstractmethod
    def _get_key(self, entity: T) -> Hashable:
        """Extract the key from an entity. Must be implemented by subclasses."""
        pass

    def add(self, entity: T) -> T:
        """
        Add an entity to the store, replacing one with the same key.

        Args:
            entity: The entity to add

        Returns:
            The added entity
        """
        self._store[self._get_key(entity)] = entity
        return entity

    def get(self, key: Hashable) -> Optional[T]:
        """Retrieve an entity by key, None if absent."""
        return self._store.get(key)

    def get_all(self) -> List[T]:
        return list(self._store.values())

    def exists(self, key: Hashable) -> bool:
        return key in self._store

    def count(self) -> int:
        return len(self._store)

    def clear(self) -> None:
        self._store.clear()
