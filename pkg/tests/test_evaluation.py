from __future__ import annotations

import json
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction

import pytest

from unigen.evaluation import (
    DuplicateId,
    EfficiencyRecord,
    InteractionMatrix,
    MatrixEntry,
    MatrixFormatError,
    PendingEntries,
    completeness,
    improvement,
    load_matrix,
    render_report,
    save_matrix,
)


def matrix(passed: int, failed: int = 0, pending: int = 0,
           name: str = "Obstacle Run") -> InteractionMatrix:
    entries = []
    for i in range(passed):
        entries.append(MatrixEntry(f"p{i}", f"passing check {i}", "pass"))
    for i in range(failed):
        entries.append(MatrixEntry(f"f{i}", f"failing check {i}", "fail"))
    for i in range(pending):
        entries.append(MatrixEntry(f"q{i}", f"untested check {i}", "pending"))
    return InteractionMatrix(game_name=name, entries=tuple(entries))


def oracle_percent(numerator: int, denominator: int) -> float:
    """Half-up one-decimal rounding computed through Fraction, so the
    production Decimal path is checked against independent arithmetic."""
    value = Fraction(100 * numerator, denominator)
    scaled = value * 10
    floor = scaled.numerator // scaled.denominator
    remainder = scaled - floor
    tenths = floor + (1 if remainder >= Fraction(1, 2) else 0)
    return tenths / 10


class TestCompleteness:
    def test_all_pass_is_exactly_100(self):
        assert completeness(matrix(15)) == 100.0

    def test_one_failure_of_sixteen(self):
        assert completeness(matrix(15, failed=1)) == 93.8

    def test_seventeen_of_nineteen(self):
        assert completeness(matrix(17, failed=2)) == 89.5

    @pytest.mark.parametrize("passed,total", [
        (15, 15), (15, 16), (17, 19), (1, 3), (2, 3), (1, 7), (5, 8), (0, 4),
    ])
    def test_agrees_with_fraction_arithmetic(self, passed, total):
        assert completeness(matrix(passed, failed=total - passed)) == \
            oracle_percent(passed, total)

    def test_half_up_tie_breaks_upward(self):
        # 100 * 19/40 = 47.5 -> 47.5; 100 * 1/16 = 6.25 -> 6.3 (not 6.2)
        assert completeness(matrix(1, failed=15)) == 6.3
        assert completeness(matrix(7, failed=33)) == 17.5

    def test_pending_entries_block_the_score(self):
        with pytest.raises(PendingEntries) as err:
            completeness(matrix(3, pending=2))
        assert err.value.ids == ["q0", "q1"]

    def test_empty_matrix_is_undefined(self):
        with pytest.raises(PendingEntries):
            completeness(InteractionMatrix(game_name="x"))


class TestImprovement:
    def test_scene_setup_timing(self):
        record = EfficiencyRecord("sceneSetup", 140, 12, "minutes")
        assert improvement(record) == 91.4

    def test_iteration_timing(self):
        record = EfficiencyRecord("iterationCycle", 75, 5, "minutes")
        assert improvement(record) == 93.3

    @pytest.mark.parametrize("manual,assisted", [
        (140, 12), (75, 5), (60, 60), (90, 0), (7, 3)])
    def test_agrees_with_fraction_arithmetic(self, manual, assisted):
        expected = float(
            (Decimal(100) * (Decimal(manual) - Decimal(assisted)) / Decimal(manual))
            .quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))
        assert improvement(EfficiencyRecord("m", manual, assisted, "min")) == expected

    def test_guards(self):
        with pytest.raises(ValueError):
            EfficiencyRecord("m", 0, 1, "min")
        with pytest.raises(ValueError):
            EfficiencyRecord("m", 10, -1, "min")


class TestMatrixFiles:
    def test_json_round_trip(self, tmp_path):
        original = matrix(2, failed=1, pending=1)
        path = tmp_path / "matrix.json"
        save_matrix(original, path)
        assert load_matrix(path) == original
        doc = json.loads(path.read_text())
        assert doc["gameName"] == "Obstacle Run"
        assert doc["entries"][0] == {
            "id": "p0", "description": "passing check 0", "result": "pass"}

    def test_json_duplicate_id_reports_the_line(self, tmp_path):
        path = tmp_path / "matrix.json"
        save_matrix(matrix(2), path)
        text = path.read_text().replace('"id": "p1"', '"id": "p0"')
        path.write_text(text)
        with pytest.raises(DuplicateId) as err:
            load_matrix(path)
        assert err.value.entry_id == "p0"
        occurrences = [n for n, line in enumerate(text.splitlines(), start=1)
                       if '"id": "p0"' in line]
        assert err.value.line == occurrences[1]  # the duplicating row

    def test_json_format_errors(self, tmp_path):
        path = tmp_path / "matrix.json"
        path.write_text('{"entries": [{"id": "a", "result": "maybe"}]}')
        with pytest.raises(MatrixFormatError, match="pass, fail, or pending"):
            load_matrix(path)
        path.write_text("[1, 2]")
        with pytest.raises(MatrixFormatError, match="entries array"):
            load_matrix(path)
        path.write_text("{broken")
        with pytest.raises(MatrixFormatError) as err:
            load_matrix(path)
        assert err.value.line == 1

    def test_csv_by_extension(self, tmp_path):
        path = tmp_path / "matrix.csv"
        path.write_text(
            "id,description,result\n"
            "i1,player collects the coin,pass\n"
            "i2,spike ends the run,fail\n"
            "\n")
        loaded = load_matrix(path)
        assert [e.result for e in loaded.entries] == ["pass", "fail"]
        assert loaded.game_name == ""

    def test_csv_by_flag_overrides_the_extension(self, tmp_path):
        path = tmp_path / "matrix.txt"
        path.write_text("id,description,result\ni1,desc,pass\n")
        assert load_matrix(path, force_csv=True).entries[0].id == "i1"

    def test_csv_duplicate_id_reports_the_row_line(self, tmp_path):
        path = tmp_path / "matrix.csv"
        path.write_text(
            "id,description,result\n"
            "i1,first,pass\n"
            "i1,second,fail\n")
        with pytest.raises(DuplicateId) as err:
            load_matrix(path)
        assert (err.value.entry_id, err.value.line) == ("i1", 3)

    def test_csv_header_is_enforced(self, tmp_path):
        path = tmp_path / "matrix.csv"
        path.write_text("name,details,outcome\ni1,x,pass\n")
        with pytest.raises(MatrixFormatError, match="header"):
            load_matrix(path)


class TestWithResult:
    def test_updates_a_single_entry(self):
        updated = matrix(1, pending=1).with_result("q0", "pass")
        assert [e.result for e in updated.entries] == ["pass", "pass"]

    def test_rejects_unknown_results(self):
        with pytest.raises(ValueError):
            matrix(1).with_result("p0", "flaky")


class TestRenderReport:
    def test_complete_matrix_prints_the_score(self):
        report = render_report(matrix(15, failed=1, name="Obstacle Run"))
        lines = report.splitlines()
        assert lines[0] == "Obstacle Run"
        assert lines[1].split() == ["id", "description", "result"]
        assert report.endswith("completeness: 93.8%\n")

    def test_pending_matrix_prints_undefined(self):
        report = render_report(matrix(2, pending=3))
        assert "completeness: undefined (3 pending)" in report
        assert "%" not in report

    def test_columns_align(self):
        report = render_report(matrix(2, failed=1))
        rows = [line for line in report.splitlines()
                if line and not line.startswith("completeness")
                and line != "Obstacle Run"]
        starts = {row.index("  ") for row in rows if "  " in row}
        assert len(starts) == 1  # first column padded to a common width
