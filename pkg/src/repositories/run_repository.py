"""
Run repository: the single writer of a run directory.
"""
from dataclasses import dataclass
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Hashable

import pandas as pd

from src.entities.grid import FieldState
from src.repositories.base import BaseRepository
from src.repositories.field_io import encode_field

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class EmittedFile:
    """A file written into the run directory."""
    name: str
    path: Path
    sha256: str
    size: int


def dump_json(payload: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class RunRepository(BaseRepository[EmittedFile]):
    """
    Every file of a run goes through this writer, which records its sha256.

    Files are written whole; a name written twice keeps the last content.
    """

    def __init__(self, out_dir: Path):
        super().__init__()
        self.out_dir = Path(out_dir)

    def _get_key(self, entity: EmittedFile) -> Hashable:
        """Files are keyed by their name inside the run directory."""
        return entity.name

    def _commit(self, name: str, data: bytes) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_bytes(data)
        digest = hashlib.sha256(data).hexdigest()
        self.add(EmittedFile(name=name, path=path, sha256=digest, size=len(data)))
        logger.debug("Wrote %s (%d bytes)", path, len(data))
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        return self._commit(name, dump_json(payload).encode("utf-8"))

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        """Write a table with full float precision and LF line endings."""
        text = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
        return self._commit(name, text.encode("utf-8"))

    def write_field(self, name: str, field: FieldState) -> Path:
        return self._commit(name, encode_field(field))

    def hashes(self) -> Dict[str, str]:
        """sha256 per emitted file, manifest excluded."""
        return {
            entry.name: entry.sha256
            for entry in sorted(self.get_all(), key=lambda e: e.name)
            if entry.name != MANIFEST_NAME
        }

    def write_manifest(self, manifest: Dict[str, Any]) -> Path:
        """Write the manifest with the content hashes of every other file."""
        return self.write_json(MANIFEST_NAME, {**manifest, "files": self.hashes()})
