"""
Initial data read from a field binary.
"""
from src.core.exceptions import ValidationError
from src.entities.exponents import ExponentSet
from src.entities.grid import FieldState, GridSpec
from src.repositories.field_io import read_field
from src.strategies.base import InitialDataRequest, InitialDataStrategy


class FileFieldStrategy(InitialDataStrategy):
    """Loads a stored field; the stored grid must match the run grid."""

    @property
    def family_name(self) -> str:
        return "file"

    def sample(self, grid: GridSpec, exps: ExponentSet, request: InitialDataRequest) -> FieldState:
        if not request.path:
            raise ValidationError("The file family needs a path")
        stored = read_field(request.path)
        if stored.grid != grid:
            raise ValidationError(
                f"Stored field grid {stored.grid.to_dict()} "
                f"does not match run grid {grid.to_dict()}"
            )
        return stored.replace(stored.values, time=0.0)
