"""Functional-completeness bookkeeping and efficiency arithmetic.

Scores are human-entered binary pass/fail per gameplay interaction; this
module is the arithmetic and serialization layer. Percentages round half-up
to one decimal place.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from decimal import Decimal, ROUND_HALF_UP
from pathlib import Path

RESULTS = ("pass", "fail", "pending")


class PendingEntries(Exception):
    """Completeness is undefined while entries are pending."""

    def __init__(self, ids: list[str]):
        super().__init__("pending entries: " + ", ".join(ids))
        self.ids = ids


class DuplicateId(Exception):
    """Two matrix rows share an id."""

    def __init__(self, entry_id: str, line: int):
        super().__init__(f"duplicate id {entry_id!r} on line {line}")
        self.entry_id = entry_id
        self.line = line


class MatrixFormatError(Exception):
    """Row is structurally wrong; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class MatrixEntry:
    id: str
    description: str
    result: str = "pending"


@dataclass(frozen=True)
class InteractionMatrix:
    game_name: str
    entries: tuple[MatrixEntry, ...] = ()

    def with_result(self, entry_id: str, result: str) -> "InteractionMatrix":
        if result not in RESULTS:
            raise ValueError(f"unknown result {result!r}")
        updated = tuple(
            replace(e, result=result) if e.id == entry_id else e
            for e in self.entries
        )
        return replace(self, entries=updated)


@dataclass(frozen=True)
class EfficiencyRecord:
    metric_name: str
    manual_value: float
    assisted_value: float
    units: str

    def __post_init__(self):
        if self.manual_value <= 0:
            raise ValueError("manualValue must be positive")
        if self.assisted_value < 0:
            raise ValueError("assistedValue must be nonnegative")


def _round1(value: Decimal) -> float:
    return float(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def completeness(matrix: InteractionMatrix) -> float:
    """100 x pass / total, half-up to one decimal; defined only when no
    entry is pending."""
    pending = [e.id for e in matrix.entries if e.result == "pending"]
    if pending:
        raise PendingEntries(pending)
    if not matrix.entries:
        raise PendingEntries([])
    passed = sum(1 for e in matrix.entries if e.result == "pass")
    return _round1(Decimal(100) * Decimal(passed) / Decimal(len(matrix.entries)))


def improvement(record: EfficiencyRecord) -> float:
    """100 x (manual - assisted) / manual, half-up to one decimal."""
    manual = Decimal(str(record.manual_value))
    assisted = Decimal(str(record.assisted_value))
    return _round1(Decimal(100) * (manual - assisted) / manual)


# ---------------------------------------------------------------------------
# Matrix files
# ---------------------------------------------------------------------------

def load_matrix(path: Path, force_csv: bool = False) -> InteractionMatrix:
    text = Path(path).read_text(encoding="utf-8")
    if force_csv or str(path).endswith(".csv"):
        return _load_csv(text)
    return _load_json(text)


def _load_json(text: str) -> InteractionMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"not valid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise MatrixFormatError("matrix must be an object with an entries array", 1)

    # Row positions for error messages: the Nth "id" key in the file belongs
    # to the Nth entry (holds for documents this module writes).
    id_lines = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if '"id"' in line:
            id_lines.append(line_number)

    entries = []
    seen: dict[str, int] = {}
    for i, raw in enumerate(doc["entries"]):
        line = id_lines[i] if i < len(id_lines) else i + 1
        if not isinstance(raw, dict):
            raise MatrixFormatError(f"entries[{i}] must be an object", line)
        entry_id = raw.get("id")
        description = raw.get("description", "")
        result = raw.get("result", "pending")
        if not isinstance(entry_id, str) or not entry_id:
            raise MatrixFormatError(f"entries[{i}] needs a nonempty string id", line)
        if result not in RESULTS:
            raise MatrixFormatError(
                f"entries[{i}] result must be pass, fail, or pending", line)
        if entry_id in seen:
            raise DuplicateId(entry_id, line)
        seen[entry_id] = line
        entries.append(MatrixEntry(entry_id, str(description), result))
    return InteractionMatrix(
        game_name=str(doc.get("gameName", "")),
        entries=tuple(entries),
    )


def _load_csv(text: str) -> InteractionMatrix:
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise MatrixFormatError("empty file", 1)
    header = [cell.strip() for cell in rows[0]]
    if header[:3] != ["id", "description", "result"]:
        raise MatrixFormatError("header must be id,description,result", 1)
    entries = []
    seen: dict[str, int] = {}
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 3:
            raise MatrixFormatError("row needs id, description, and result", line)
        entry_id, description, result = row[0].strip(), row[1], row[2].strip()
        if not entry_id:
            raise MatrixFormatError("empty id", line)
        if result not in RESULTS:
            raise MatrixFormatError("result must be pass, fail, or pending", line)
        if entry_id in seen:
            raise DuplicateId(entry_id, line)
        seen[entry_id] = line
        entries.append(MatrixEntry(entry_id, description, result))
    return InteractionMatrix(game_name="", entries=tuple(entries))


def save_matrix(matrix: InteractionMatrix, path: Path) -> None:
    doc = {
        "gameName": matrix.game_name,
        "entries": [
            {"id": e.id, "description": e.description, "result": e.result}
            for e in matrix.entries
        ],
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(
        json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def render_report(matrix: InteractionMatrix) -> str:
    """Plain-text table plus the completeness line when it is defined."""
    rows = [("id", "description", "result")]
    rows += [(e.id, e.description, e.result) for e in matrix.entries]
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = []
    if matrix.game_name:
        lines.append(matrix.game_name)
    for row in rows:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    pending = sum(1 for e in matrix.entries if e.result == "pending")
    if pending:
        lines.append(f"completeness: undefined ({pending} pending)")
    else:
        lines.append(f"completeness: {completeness(matrix)}%")
    return "\n".join(lines) + "\n"
