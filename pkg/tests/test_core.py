"""Integration tests for the analysis commands"""

import json
import math
from pathlib import Path

import pytest

from sftpressure.core import (
    duality,
    info,
    load_curve,
    partition,
    phase_scan,
    pressure_curve,
    summary_rows,
    summary_table,
    variance,
)
from sftpressure.exceptions import InputError, InputFormatError
from sftpressure.parser import load_document
from sftpressure.utils import read_csv, to_csv, write_text

T_STAR = math.log(2 / ((1 + math.sqrt(5)) / 2))


@pytest.fixture
def fixtures_dir():
    """Return path to test fixtures directory"""
    return Path(__file__).parent / "fixtures"


@pytest.fixture
def golden_doc(fixtures_dir):
    return load_document(fixtures_dir / "golden.json")


@pytest.fixture
def union_doc(fixtures_dir):
    return load_document(fixtures_dir / "golden_full2.json")


class TestPressureCurve:
    """Test pressure-curve artifacts"""

    def test_csv_artifact(self, golden_doc, tmp_path, capsys):
        """Test the t = 0 row carries the topological entropy"""
        output = tmp_path / "curve.csv"
        pressure_curve(golden_doc, "phi_t", -5.0, 5.0, 1001, output)

        assert capsys.readouterr().out == f"Created: {output}\n"
        header, rows = read_csv(output)
        assert header == ["t", "pressure"]
        assert rows.shape == (1001, 2)
        assert rows[500, 0] == pytest.approx(0.0, abs=1e-12)
        assert rows[500, 1] == pytest.approx(0.4812118251, abs=1e-10)

    def test_stdout_without_output(self, golden_doc, capsys):
        pressure_curve(golden_doc, "phi_t", 0.0, 1.0, 3)
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "t,pressure"
        assert len(lines) == 4

    def test_json_format(self, golden_doc, tmp_path):
        output = tmp_path / "curve.json"
        pressure_curve(golden_doc, "phi_t", -1.0, 1.0, 5, output, fmt="json")
        rows = json.loads(output.read_text())
        assert [r["t"] for r in rows] == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_byte_identical_reruns(self, golden_doc, tmp_path):
        """Test equal inputs give byte-identical artifacts"""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        pressure_curve(golden_doc, "phi_t", -5.0, 5.0, 101, first)
        pressure_curve(golden_doc, "phi_t", -5.0, 5.0, 101, second, jobs=3)
        assert first.read_bytes() == second.read_bytes()

    def test_base_potential(self, golden_doc, tmp_path):
        """Test φ₀ = g shifts the curve by one unit of t"""
        output = tmp_path / "shifted.csv"
        curve = pressure_curve(golden_doc, "phi_t", -1.0, 1.0, 3, output, base="g")
        assert curve.values[0] == pytest.approx(0.4812118251, abs=1e-10)

    def test_unknown_potential(self, golden_doc):
        with pytest.raises(InputFormatError, match="Unknown potential"):
            pressure_curve(golden_doc, "nope", -1.0, 1.0, 3)

    def test_reducible_system_uses_envelope(self, union_doc, tmp_path):
        curve = pressure_curve(
            union_doc, "golden_indicator", -1.0, 1.0, 11, tmp_path / "union.csv"
        )
        assert curve.components[0] == 1
        assert curve.components[-1] == 0
        assert curve.values[-1] == pytest.approx(math.log((1 + math.sqrt(5)) / 2) + 1.0)


class TestLoadCurve:
    """Test reading curves back"""

    def test_round_trip(self, golden_doc, tmp_path):
        output = tmp_path / "curve.csv"
        curve = pressure_curve(golden_doc, "phi_t", -2.0, 2.0, 41, output)
        loaded = load_curve(output)
        assert loaded.t_grid.tolist() == curve.t_grid.tolist()
        assert loaded.values.tolist() == curve.values.tolist()

    def test_wrong_header(self, tmp_path):
        path = write_text(tmp_path / "bad.csv", to_csv(["a", "rate"], [[0.0, 1.0]] * 3))
        with pytest.raises(InputError, match="t,pressure"):
            load_curve(path)

    def test_too_few_rows(self, tmp_path):
        path = write_text(tmp_path / "short.csv", to_csv(["t", "pressure"], [[0.0, 1.0]]))
        with pytest.raises(InputError, match="at least 3"):
            load_curve(path)


class TestDuality:
    """Test the duality command's three artifacts"""

    def test_artifacts(self, golden_doc, tmp_path, capsys):
        output = tmp_path / "conj.csv"
        summary = duality(golden_doc, "phi_t", -10.0, 10.0, 2001, output=output)

        created = capsys.readouterr().out.splitlines()
        assert created == [
            f"Created: {output}",
            f"Created: {tmp_path / 'conj_biconjugate.csv'}",
            f"Created: {tmp_path / 'conj_summary.json'}",
        ]
        assert read_csv(output)[0] == ["a", "rate"]
        header, rows = read_csv(tmp_path / "conj_biconjugate.csv")
        assert header == ["t", "pressure", "biconjugate"]
        assert rows.shape == (2001, 3)
        written = json.loads((tmp_path / "conj_summary.json").read_text())
        assert written.keys() == summary.keys()
        assert written["tangent_slope"] == summary["tangent_slope"]

    def test_summary_values(self, golden_doc, capsys):
        summary = duality(golden_doc, "phi_t", -10.0, 10.0, 2001)
        printed = json.loads(capsys.readouterr().out)

        assert printed["min_fenchel_young_gap"] >= -1e-10
        assert printed["max_biconjugate_deviation"] < 5e-4
        assert printed["entropy_from_conjugate"] == pytest.approx(0.4812118251, abs=2e-3)
        assert summary["subdifferential"]["t"] == 0.0
        assert summary["subdifferential"]["corner"] is False

    def test_two_phase_envelope(self, union_doc, capsys):
        """Test P** = P and entropy recovery on the winning component"""
        summary = duality(union_doc, "golden_indicator", -1.0, 1.0, 201, at=T_STAR)
        capsys.readouterr()

        assert summary["max_biconjugate_deviation"] < 5e-4
        assert summary["min_fenchel_young_gap"] >= -1e-10
        assert summary["entropy_from_measure"] == pytest.approx(math.log(2), abs=1e-12)
        assert summary["entropy_from_conjugate"] == pytest.approx(math.log(2), abs=1e-4)
        assert summary["subdifferential"]["corner"] is True

    def test_a_steps(self, golden_doc, tmp_path):
        output = tmp_path / "conj.csv"
        duality(golden_doc, "phi_t", -5.0, 5.0, 101, a_steps=11, output=output)
        assert read_csv(output)[1].shape == (11, 2)


class TestVariance:
    """Test the variance command"""

    def test_golden_mean_at_zero(self, golden_doc, tmp_path):
        """Test σ² = 1/(5√5) and the mean (λ+1)/(λ+2)"""
        output = tmp_path / "variance.json"
        variance(golden_doc, "phi_t", direction="g", output=output)
        result = json.loads(output.read_text())

        assert list(result) == [
            "t",
            "lambda",
            "pressure",
            "gap",
            "mean",
            "variance",
            "fd_mean",
            "fd_variance",
            "covariances",
        ]
        assert result["variance"] == pytest.approx(0.0894427191, abs=1e-7)
        assert result["fd_variance"] == pytest.approx(result["variance"], abs=1e-5)
        assert result["mean"] == pytest.approx(0.7236067977, abs=1e-9)
        assert result["lambda"] == pytest.approx(1.6180339887, abs=1e-10)
        assert len(result["covariances"]) == 11

    def test_depth_two_observable(self, golden_doc, capsys):
        """Test a depth-2 observable goes through block recoding"""
        result = variance(golden_doc, "phi_t", direction="pair", at=0.5)
        capsys.readouterr()
        assert result["mean"] == pytest.approx(result["fd_mean"], abs=1e-6)
        assert result["variance"] == pytest.approx(result["fd_variance"], abs=1e-4)


class TestPartition:
    """Test the partition-sum table"""

    def test_header_and_convergence(self, golden_doc, tmp_path):
        output = tmp_path / "partition.csv"
        rows = partition(golden_doc, "phi_t", 200, output=output)
        header, table = read_csv(output)

        assert header == ["n", "log_sum", "estimate", "abs_err_vs_spectral"]
        assert table.shape == (200, 4)
        assert table[:, 0].tolist() == list(range(1, 201))
        assert rows[-1][3] < rows[0][3]

    def test_zero_potential_counts(self, golden_doc, capsys):
        rows = partition(golden_doc, "zero", 5, at=0.0)
        capsys.readouterr()
        assert rows[4][1] == pytest.approx(math.log(13))


class TestPhaseScan:
    """Test corner reports"""

    def test_union_has_one_corner(self, union_doc, tmp_path):
        output = tmp_path / "corners.json"
        phase_scan(union_doc, "golden_indicator", -5.0, 5.0, 1001, output=output)
        corners = json.loads(output.read_text())

        assert len(corners) == 1
        assert corners[0]["t_star"] == pytest.approx(T_STAR, abs=1e-6)
        assert corners[0]["jump"] == pytest.approx(1.0, abs=1e-3)
        assert (corners[0]["left_phase"], corners[0]["right_phase"]) == (1, 0)

    def test_golden_mean_has_none(self, golden_doc, capsys):
        assert phase_scan(golden_doc, "phi_t", -5.0, 5.0, 1001) == []
        assert capsys.readouterr().out == "[]\n"


class TestInfo:
    """Test system summaries"""

    def test_text(self, golden_doc, capsys):
        info(golden_doc)
        out = capsys.readouterr().out
        assert "Alphabet size: 2" in out
        assert "Primitive: yes" in out
        assert "Mixing time: 2" in out
        assert "Topological entropy: 0.4812118250596" in out
        assert "Potential pair: depth 2" in out

    def test_json_for_reducible_system(self, union_doc, tmp_path):
        output = tmp_path / "info.json"
        info(union_doc, output, fmt="json")
        summary = json.loads(output.read_text())

        assert summary["primitive"] is False
        assert summary["components"] == [[1, 2], [3, 4]]
        assert summary["topological_entropy"] == pytest.approx(math.log(2))
        assert summary["component_entropies"] == pytest.approx(
            [math.log((1 + math.sqrt(5)) / 2), math.log(2)]
        )
        assert "mixing_time" not in summary


class TestSummaryTable:
    """Test the golden mean constants table"""

    def test_only_the_mean_disagrees(self):
        rows = {row.label: row for row in summary_rows()}
        flagged = [label for label, row in rows.items() if row.disagrees]

        assert flagged == ["Mean P′(0; g)"]
        assert rows["Variance P″(0; g)"].computed == pytest.approx(0.0894427191, abs=1e-9)
        assert rows["Leading eigenvalue λ(0)"].computed == pytest.approx(1.6180339887)
        assert rows["Phase transitions on [−5, 5]"].computed == 0.0

    def test_printed_table(self, tmp_path):
        output = tmp_path / "table.txt"
        summary_table(output)
        text = output.read_text()

        assert text.count("DISAGREES") == 1
        assert "0.7236068" in text
        assert "0.08944272" in text
        assert "λ² − e^t·λ − e^t = 0" in text
        assert "DESIGN.md" not in text
