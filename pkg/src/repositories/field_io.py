"""
Field binary format: length-prefixed JSON header followed by raw complex samples.

Layout:
    bytes 0-7   header length n, unsigned little-endian 64-bit
    bytes 8-8+n UTF-8 JSON header {"format", "version", "N", "extent", "points", "time", "dtype"}
    remainder   points^N complex128 samples, little-endian, re/im interleaved, C order
"""
import json
from pathlib import Path
import struct
from typing import Union

import numpy as np

from src.core.exceptions import ValidationError
from src.entities.grid import FieldState, GridSpec

FORMAT_NAME = "nls-field"
FORMAT_VERSION = 1
SAMPLE_DTYPE = np.dtype("<c16")


def encode_field(field: FieldState) -> bytes:
    """Serialize a field to bytes."""
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        **field.grid.to_dict(),
        "time": field.time,
        "dtype": "complex128-le",
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    samples = np.ascontiguousarray(field.values, dtype=SAMPLE_DTYPE)
    return struct.pack("<Q", len(blob)) + blob + samples.tobytes(order="C")


def decode_field(data: bytes) -> FieldState:
    """
    Deserialize a field.

    Raises:
        ValidationError: On a malformed header or a sample count mismatch
    """
    if len(data) < 8:
        raise ValidationError("Field binary is truncated")
    (length,) = struct.unpack("<Q", data[:8])
    try:
        header = json.loads(data[8:8 + length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"Unreadable field header: {exc}")
    if header.get("format") != FORMAT_NAME or header.get("version") != FORMAT_VERSION:
        raise ValidationError(
            f"Unsupported field format {header.get('format')!r} v{header.get('version')}"
        )

    try:
        grid = GridSpec(
            N=int(header["N"]), extent=float(header["extent"]), points=int(header["points"])
        )
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"Invalid grid in field header: {exc}")
    samples = np.frombuffer(data[8 + length:], dtype=SAMPLE_DTYPE)
    if samples.size != grid.points ** grid.N:
        raise ValidationError(
            f"Field binary holds {samples.size} samples, header expects {grid.points ** grid.N}"
        )
    values = samples.reshape(grid.shape).copy()
    return FieldState(grid=grid, values=values, time=float(header["time"]))


def write_field(path: Union[str, Path], field: FieldState) -> bytes:
    """Write a field binary and return the bytes written."""
    data = encode_field(field)
    Path(path).write_bytes(data)
    return data


def read_field(path: Union[str, Path]) -> FieldState:
    """
    Read a field binary.

    Raises:
        ValidationError: If the file is missing or malformed
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"Field file not found: {path}")
    return decode_field(path.read_bytes())
