"""
Integration tests for the command-line verbs.
"""
import json
import math

import pandas as pd
import pytest

from src.main import main

FAST_EVOLUTION = [
    "--points", "512", "--dt", "1e-3", "--t-end", "0.05", "--checkpoint-every", "10",
]


def read_json(path):
    return json.loads(path.read_text())


def error_record(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


class TestExponentsVerb:
    """Test the exponents verb."""

    def test_reference_case(self, tmp_path):
        """Test exact exponents and the manifest for N = 1, p = 7."""
        out = tmp_path / "run"

        assert main(["exponents", "--N", "1", "--p", "7", "--out", str(out)]) == 0

        exps = read_json(out / "exponents.json")
        manifest = read_json(out / "manifest.json")
        assert exps["sigma"] == "5"
        assert exps["sCritical"] == "1/6"
        assert manifest["tool"] == "nls-atlas"
        assert manifest["experiment"] == "exponents"
        assert list(manifest["files"]) == ["exponents.json"]

    def test_power_out_of_range(self, tmp_path, capsys):
        """Test exit status 2 and the error record for p at the mass-critical power."""
        code = main(["exponents", "--N", "1", "--p", "5", "--out", str(tmp_path / "run")])

        assert code == 2
        record = error_record(capsys)
        assert record["error"] == "PowerOutOfRange"
        assert record["exitCode"] == 2

    def test_unknown_verb(self):
        """Test that argparse rejects an unknown verb with status 2."""
        with pytest.raises(SystemExit) as info:
            main(["scatter"])
        assert info.value.code == 2


class TestGroundStateVerb:
    """Test the groundstate verb."""

    def test_profile_and_norms(self, tmp_path):
        """Test the profile table and the Pohozaev residuals."""
        out = tmp_path / "run"

        assert main(["groundstate", "--out", str(out)]) == 0

        frame = pd.read_csv(out / "groundstate.csv")
        result = read_json(out / "groundstate.json")
        assert list(frame.columns) == ["r", "q", "dq"]
        assert frame["q"].iloc[0] == pytest.approx(4.0 ** (1.0 / 6.0), rel=1e-9)
        assert max(result["pohozaevResiduals"]) <= 1e-6
        assert (out / "cache").is_dir()

    def test_non_convergence(self, tmp_path, capsys):
        """Test exit status 3 when the bisection cap is reached."""
        config = tmp_path / "run.env"
        config.write_text("GROUND_STATE__MAX_ITERATIONS=3\nGROUND_STATE__CACHE=false\n")

        code = main(["groundstate", "--config", str(config), "--out", str(tmp_path / "run")])

        assert code == 3
        assert error_record(capsys)["error"] == "NotConverged"


class TestClassifyVerb:
    """Test the classify verb."""

    @pytest.mark.parametrize(
        "lam, verdict",
        [("0.9", "InsideWell"), ("1.0", "Boundary"), ("1.1", "OutsideWellAboveGradient")],
    )
    def test_scaled_ground_state(self, tmp_path, lam, verdict):
        """Test the verdict of lam Q on both sides of the threshold."""
        out = tmp_path / "run"

        assert main(["classify", "--lambda", lam, "--points", "512", "--out", str(out)]) == 0

        result = read_json(out / "classify.json")
        assert result["well"]["verdict"] == verdict
        assert result["statsSource"] == "exact"

    def test_inside_reports_bounds(self, tmp_path):
        """Test that inside-well data carry the energy bounds and eta."""
        out = tmp_path / "run"

        main(["classify", "--lambda", "0.5", "--points", "512", "--out", str(out)])

        result = read_json(out / "classify.json")
        assert result["energyBounds"] is not None
        assert result["coercivityConstant"] > 0.0

    def test_kicked_gaussian_is_boosted(self, tmp_path):
        """Test that the momentum is removed before the verdict."""
        out = tmp_path / "run"
        args = ["classify", "--family", "gaussian", "--kick", "2", "--points", "512"]

        assert main(args + ["--out", str(out)]) == 0

        result = read_json(out / "classify.json")
        assert result["galileanReduction"] == pytest.approx(4.0 * math.sqrt(math.pi), rel=1e-12)
        assert result["stats"]["momentum"] == [0.0]
        assert result["well"]["verdict"] == "InsideWell"


class TestEvolveVerb:
    """Test the evolve verb."""

    def test_trajectory(self, tmp_path):
        """Test the trajectory table, the summary and the terminal field."""
        out = tmp_path / "run"

        args = ["evolve", "--lambda", "0.9", "--save-field", "--out", str(out)]
        code = main(args + FAST_EVOLUTION)

        assert code == 0
        frame = pd.read_csv(out / "trajectory.csv")
        summary = read_json(out / "summary.json")
        assert len(frame) == 6
        assert frame["t"].iloc[-1] == pytest.approx(0.05)
        assert set(frame["verdict"]) == {"InsideWell"}
        assert summary["trajectory"]["classification"] == "GlobalInWell"
        assert "final_field.bin" in read_json(out / "manifest.json")["files"]

    def test_replay_from_manifest(self, tmp_path):
        """Test that replaying a manifest reproduces the trajectory."""
        first, second = tmp_path / "first", tmp_path / "second"
        main(["evolve", "--lambda", "0.7", "--out", str(first)] + FAST_EVOLUTION)

        main(["evolve", "--config", str(first / "manifest.json"), "--out", str(second)])

        assert (first / "trajectory.csv").read_bytes() == (second / "trajectory.csv").read_bytes()

    def test_kicked_datum_is_boosted(self, tmp_path):
        """Test that a kicked Gaussian is evolved in its rest frame."""
        out = tmp_path / "run"
        args = ["evolve", "--family", "gaussian", "--kick", "2", "--out", str(out)]

        assert main(args + FAST_EVOLUTION) == 0

        frame = pd.read_csv(out / "trajectory.csv")
        summary = read_json(out / "summary.json")
        assert summary["galileanReduction"] == pytest.approx(4.0 * math.sqrt(math.pi), rel=1e-6)
        assert frame["Px"].abs().max() < 1e-6
        assert set(frame["verdict"]) == {"InsideWell"}

    def test_resting_datum_is_not_boosted(self, tmp_path):
        """Test that zero-momentum data report no reduction."""
        out = tmp_path / "run"

        main(["evolve", "--lambda", "0.9", "--out", str(out)] + FAST_EVOLUTION)

        assert read_json(out / "summary.json")["galileanReduction"] is None


class TestSweepVerb:
    """Test the sweep verb."""

    def test_empty_lambda_list(self, tmp_path, capsys):
        """Test that an empty sweep is a usage error and writes nothing."""
        out = tmp_path / "run"

        assert main(["sweep", "--lambdas", "", "--out", str(out)]) == 2
        assert error_record(capsys)["error"] == "ValidationError"
        assert not out.exists()

    def test_rows_and_determinism(self, tmp_path):
        """Test row order and byte-identical output for identical runs."""
        runs = [tmp_path / "a", tmp_path / "b"]
        for out in runs:
            args = ["sweep", "--lambdas", "0.5,1.2", "--out", str(out)] + FAST_EVOLUTION
            assert main(args) == 0

        frame = pd.read_csv(runs[0] / "sweep.csv")
        files = [read_json(out / "manifest.json")["files"] for out in runs]
        assert list(frame["lambda"]) == [0.5, 1.2]
        assert list(frame["verdict"]) == ["InsideWell", "OutsideWellAboveGradient"]
        assert files[0] == files[1]


class TestSelftestVerb:
    """Test the selftest verb and its exit status."""

    def test_pohozaev_passes(self, tmp_path):
        """Test a passing suite."""
        out = tmp_path / "run"

        assert main(["selftest", "--suite", "pohozaev", "--out", str(out)]) == 0
        assert read_json(out / "selftest.json")["passed"] is True

    def test_corrupted_norms_fail(self, tmp_path):
        """Test that fault injection gives exit status 1."""
        out = tmp_path / "run"

        code = main(["selftest", "--suite", "pohozaev", "--corrupt-norms", "--out", str(out)])

        assert code == 1
        assert read_json(out / "selftest.json")["passed"] is False

    def test_gronwall_shortcut(self, tmp_path):
        """Test the single-suite shortcut verb."""
        out = tmp_path / "run"
        config = tmp_path / "run.env"
        config.write_text("SELFTEST__GRONWALL_INSTANCES=6\n")

        assert main(["gronwall-selftest", "--config", str(config), "--out", str(out)]) == 0

        suites = read_json(out / "selftest.json")["suites"]
        assert [suite["name"] for suite in suites] == ["gronwall"]
