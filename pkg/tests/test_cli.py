"""Tests for the command-line interface"""

import json
from pathlib import Path

import pytest

from sftpressure.cli import (
    EXIT_INPUT,
    EXIT_NUMERICAL,
    EXIT_OK,
    RunConfig,
    config_from_args,
    create_parser,
    main,
    run,
)


@pytest.fixture
def fixtures_dir():
    """Return path to test fixtures directory"""
    return Path(__file__).parent / "fixtures"


class TestParser:
    """Test argument parsing"""

    def test_grid_defaults(self, fixtures_dir):
        parsed = create_parser().parse_args(
            ["pressure-curve", "--input", str(fixtures_dir / "golden.json"), "--potential", "g"]
        )
        config = config_from_args(parsed)
        assert (config.t_min, config.t_max, config.steps, config.jobs) == (-5.0, 5.0, 1001, 1)
        assert config.format == "csv"
        assert config.output_path is None

    def test_variance_flags(self):
        parsed = create_parser().parse_args(
            [
                "variance",
                "--input",
                "x.json",
                "--potential",
                "phi_t",
                "--at",
                "0.5",
                "--direction",
                "g",
                "--tol",
                "1e-10",
                "-vv",
            ]
        )
        config = config_from_args(parsed)
        assert config.at == 0.5
        assert config.direction == "g"
        assert config.tol == 1e-10
        assert parsed.verbose == 2

    def test_verify_seed(self):
        config = config_from_args(create_parser().parse_args(["verify", "--seed", "3"]))
        assert config.seed == 3
        assert config.input_path is None

    def test_missing_required_flag(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            create_parser().parse_args(["pressure-curve", "--potential", "g"])
        assert exc_info.value.code == 2
        assert "--input" in capsys.readouterr().err

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            create_parser().parse_args(["burst"])


class TestRunConfig:
    """Test flag validation"""

    @pytest.mark.parametrize(
        "kwargs, message",
        [
            ({"t_min": 1.0, "t_max": 1.0}, "--t-min"),
            ({"steps": 2}, "--steps"),
            ({"jobs": 0}, "--jobs"),
            ({"tol": 0.0}, "--tol"),
            ({"a_steps": 1}, "--a-steps"),
        ],
    )
    def test_invalid_flags(self, kwargs, message):
        config = RunConfig(
            command="duality", input_path=Path("x.json"), potential="g", **kwargs
        )
        with pytest.raises(ValueError, match=message):
            config.validate()

    def test_requires_potential(self):
        with pytest.raises(ValueError, match="--potential"):
            RunConfig(command="phase-scan", input_path=Path("x.json")).validate()

    def test_n_max(self):
        config = RunConfig(
            command="partition", input_path=Path("x.json"), potential="g", n_max=1
        )
        with pytest.raises(ValueError, match="--n-max"):
            config.validate()


class TestExitCodes:
    """Test mapping of failures to exit codes"""

    def test_success(self, fixtures_dir, tmp_path, capsys):
        output = tmp_path / "curve.csv"
        config = RunConfig(
            command="pressure-curve",
            input_path=fixtures_dir / "golden.json",
            potential="phi_t",
            steps=11,
            output_path=output,
        )
        assert run(config) == EXIT_OK
        assert output.exists()
        assert f"Created: {output}" in capsys.readouterr().out

    def test_missing_file(self, tmp_path, capsys):
        config = RunConfig(
            command="info", input_path=tmp_path / "absent.json", potential=None
        )
        assert run(config) == EXIT_INPUT
        assert capsys.readouterr().err.startswith("Error: Input file not found")

    def test_unknown_potential(self, fixtures_dir, capsys):
        config = RunConfig(
            command="variance", input_path=fixtures_dir / "golden.json", potential="nope"
        )
        assert run(config) == EXIT_INPUT
        assert "Unknown potential: nope" in capsys.readouterr().err

    def test_reducible_system_rejected_by_variance(self, fixtures_dir, capsys):
        config = RunConfig(
            command="variance",
            input_path=fixtures_dir / "golden_full2.json",
            potential="golden_indicator",
        )
        assert run(config) == EXIT_INPUT
        assert "Error:" in capsys.readouterr().err

    def test_invalid_flags(self, capsys):
        config = RunConfig(command="pressure-curve", input_path=Path("x.json"))
        assert run(config) == EXIT_INPUT
        assert "requires --potential" in capsys.readouterr().err

    def test_numerical_failure(self, fixtures_dir, capsys, monkeypatch):
        from sftpressure import core
        from sftpressure.exceptions import NoConvergenceError

        def fail(*args, **kwargs):
            raise NoConvergenceError("power iteration did not converge")

        monkeypatch.setattr(core, "phase_scan", fail)
        config = RunConfig(
            command="phase-scan",
            input_path=fixtures_dir / "golden.json",
            potential="phi_t",
        )
        assert run(config) == EXIT_NUMERICAL
        assert "did not converge" in capsys.readouterr().err


class TestMain:
    """Test the console entry point"""

    def test_phase_scan(self, fixtures_dir, tmp_path):
        output = tmp_path / "corners.json"
        with pytest.raises(SystemExit) as exc_info:
            main(
                [
                    "phase-scan",
                    "--input",
                    str(fixtures_dir / "golden_full2.json"),
                    "--potential",
                    "golden_indicator",
                    "-o",
                    str(output),
                ]
            )
        assert exc_info.value.code == 0
        assert len(json.loads(output.read_text())) == 1

    def test_duality_on_two_phase_system(self, fixtures_dir, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(
                [
                    "duality",
                    "--input",
                    str(fixtures_dir / "golden_full2.json"),
                    "--potential",
                    "golden_indicator",
                    "--t-min",
                    "-1",
                    "--t-max",
                    "1",
                    "--steps",
                    "201",
                ]
            )
        assert exc_info.value.code == 0
        assert json.loads(capsys.readouterr().out)["max_biconjugate_deviation"] < 5e-4

    def test_info_json(self, fixtures_dir, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["info", "--input", str(fixtures_dir / "full2.json"), "--format", "json"])
        assert exc_info.value.code == 0
        assert json.loads(capsys.readouterr().out)["primitive"] is True

    def test_non_json_input(self, tmp_path, capsys):
        path = tmp_path / "system.txt"
        path.write_text("{}")
        with pytest.raises(SystemExit) as exc_info:
            main(["info", "--input", str(path)])
        assert exc_info.value.code == 2
        assert "not a JSON document" in capsys.readouterr().err

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert "sftpressure" in capsys.readouterr().out
