"""
Unit tests for the field binary, the run writer and the ground-state store.
"""
import hashlib
import json
import struct

import numpy as np
import pandas as pd
import pytest

from src.core.exceptions import ValidationError
from src.entities.grid import FieldState, GridSpec
from src.repositories import GroundStateRepository, RunRepository
from src.repositories.field_io import decode_field, encode_field, read_field


@pytest.fixture
def field_2d():
    grid = GridSpec(2, 4.0, 8)
    x, y = grid.coordinates
    return FieldState(grid, np.exp(-(x * x + y * y)) * np.exp(1j * x), time=0.25)


class TestFieldBinary:
    """Test suite for the field binary layout."""

    def test_layout(self, field_2d):
        """Test the length prefix, the JSON header and the sample block."""
        data = encode_field(field_2d)
        (length,) = struct.unpack("<Q", data[:8])
        header = json.loads(data[8:8 + length])

        assert header["format"] == "nls-field"
        assert header["N"] == 2 and header["points"] == 8
        assert header["time"] == 0.25
        assert len(data) == 8 + length + 16 * 64

    def test_decode_restores_samples(self, field_2d):
        """Test that decoding restores grid, time and samples bit for bit."""
        restored = decode_field(encode_field(field_2d))

        assert restored.grid == field_2d.grid
        assert restored.time == field_2d.time
        assert np.array_equal(restored.values, field_2d.values)

    def test_truncated_samples(self, field_2d):
        """Test that a short sample block is refused."""
        with pytest.raises(ValidationError, match="header expects 64"):
            decode_field(encode_field(field_2d)[:-16])

    def test_foreign_format(self):
        """Test that a header of another format is refused."""
        blob = json.dumps({"format": "other", "version": 1}).encode()
        with pytest.raises(ValidationError, match="Unsupported field format"):
            decode_field(struct.pack("<Q", len(blob)) + blob)

    def test_missing_file(self, tmp_path):
        """Test that a missing path is reported."""
        with pytest.raises(ValidationError, match="not found"):
            read_field(tmp_path / "absent.bin")


class TestRunRepository:
    """Test suite for the run writer."""

    def test_hashes_match_content(self, tmp_path):
        """Test that recorded sha256 values match the bytes on disk."""
        runs = RunRepository(tmp_path)
        runs.write_json("summary.json", {"b": 1, "a": [1.5, None]})
        runs.write_csv("table.csv", pd.DataFrame({"t": [0.0, 0.1], "M": [1.0, 1.0]}))

        for name, digest in runs.hashes().items():
            assert hashlib.sha256((tmp_path / name).read_bytes()).hexdigest() == digest

    def test_canonical_json(self, tmp_path):
        """Test sorted keys, two-space indent and the trailing newline."""
        path = RunRepository(tmp_path).write_json("x.json", {"b": 1, "a": 2})

        assert path.read_text() == '{\n  "a": 2,\n  "b": 1\n}\n'

    def test_csv_precision(self, tmp_path):
        """Test that floats are written with full precision."""
        path = RunRepository(tmp_path).write_csv("x.csv", pd.DataFrame({"v": [0.1 + 0.2]}))

        assert path.read_text() == "v\n0.30000000000000004\n"

    def test_manifest_lists_other_files(self, tmp_path, field_2d):
        """Test that the manifest carries the hashes of every other file."""
        runs = RunRepository(tmp_path)
        runs.write_field("final_field.bin", field_2d)
        runs.write_json("summary.json", {})

        path = runs.write_manifest({"tool": "nls-atlas"})
        manifest = json.loads(path.read_text())

        assert sorted(manifest["files"]) == ["final_field.bin", "summary.json"]
        assert manifest["tool"] == "nls-atlas"
        assert runs.count() == 3


class TestGroundStateRepository:
    """Test suite for the ground-state store."""

    def test_memoized(self, ground_states, exps_1d):
        """Test that a second request returns the stored entry."""
        first = ground_states.get_or_solve(exps_1d)

        assert ground_states.get_or_solve(exps_1d) is first
        assert ground_states.exists(first.key)

    def test_disk_cache(self, tmp_path, exps_1d, case_1d):
        """Test that a cached profile is loaded instead of re-solved."""
        _, entry = case_1d
        writer = GroundStateRepository(cache_dir=tmp_path)
        writer._save(entry)

        loaded = GroundStateRepository(cache_dir=tmp_path).get_or_solve(exps_1d)

        assert len(list(tmp_path.glob("*.csv"))) == 1
        assert np.array_equal(loaded.profile.q, entry.profile.q)
        assert loaded.norms.mass == entry.norms.mass
        assert loaded.norms.thr_energy == entry.norms.thr_energy
        assert loaded.profile.p == exps_1d.p
