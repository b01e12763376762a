"""
Unit tests for run configuration loading.
"""
import json

import pytest

from src.core.config import load_config
from src.core.exceptions import ConfigError


class TestLoadConfig:
    """Test suite for load_config."""

    def test_defaults(self):
        """Test the configuration without a file or overrides."""
        config = load_config()

        assert config.N == 1
        assert config.p == "7"
        assert config.grid.points == 4096
        assert config.controls.max_phase == 0.05

    def test_dotenv_file(self, tmp_path):
        """Test key=value files with nested keys."""
        path = tmp_path / "run.env"
        path.write_text("N=2\nP=7/3\nGRID__POINTS=64\nINITIAL__FAMILY=gaussian\n")

        config = load_config(str(path))

        assert config.N == 2
        assert config.p == "7/3"
        assert config.grid.points == 64
        assert config.grid.extent == 16.0
        assert config.initial.family == "gaussian"

    def test_overrides_win_and_merge(self, tmp_path):
        """Test that overrides replace single nested keys and keep the rest."""
        path = tmp_path / "run.env"
        path.write_text("GRID__POINTS=64\nGRID__EXTENT=8\n")

        config = load_config(str(path), {"grid": {"points": 128}, "seed": 5})

        assert config.grid.points == 128
        assert config.grid.extent == 8.0
        assert config.seed == 5

    def test_unknown_key(self, tmp_path):
        """Test that unknown keys are refused."""
        path = tmp_path / "run.env"
        path.write_text("GRID__SPACING=0.1\n")
        with pytest.raises(ConfigError, match="Invalid configuration"):
            load_config(str(path))

    def test_invalid_power(self):
        """Test that a non-rational power is refused."""
        with pytest.raises(ConfigError, match="Cannot read power"):
            load_config(overrides={"p": "seven"})

    def test_float_power_is_exact(self):
        """Test that 3.5 is stored as 7/2."""
        assert load_config(overrides={"p": 3.5}).p == "7/2"

    def test_range_checks(self):
        """Test field constraints."""
        with pytest.raises(ConfigError, match="controls.dt"):
            load_config(overrides={"controls": {"dt": -1.0}})
        with pytest.raises(ConfigError, match="selftest.suites"):
            load_config(overrides={"selftest": {"suites": ["nope"]}})

    def test_missing_file(self, tmp_path):
        """Test that a missing config file is reported."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(str(tmp_path / "absent.env"))

    def test_manifest_replay(self, tmp_path):
        """Test that a manifest's config snapshot rebuilds the same run."""
        original = load_config(overrides={"N": 2, "p": "3", "grid": {"points": 32}, "seed": 9})
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"tool": "nls-atlas", "config": original.snapshot()}))

        replayed = load_config(str(path), {"seed": 10})

        assert replayed.N == 2
        assert replayed.grid.points == 32
        assert replayed.seed == 10
        assert replayed.snapshot() == {**original.snapshot(), "seed": 10}

    def test_json_without_config(self, tmp_path):
        """Test that a JSON file without a config snapshot is refused."""
        path = tmp_path / "other.json"
        path.write_text("{}")
        with pytest.raises(ConfigError, match="not a run manifest"):
            load_config(str(path))
