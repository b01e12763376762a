from src.repositories.base import BaseRepository
from src.repositories.ground_state_repository import GroundStateEntry, GroundStateRepository
from src.repositories.run_repository import EmittedFile, RunRepository

__all__ = [
    "BaseRepository",
    "EmittedFile",
    "GroundStateEntry",
    "GroundStateRepository",
    "RunRepository",
]
