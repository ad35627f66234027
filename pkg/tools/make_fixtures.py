#!/usr/bin/env python3
"""Regenerate the committed test fixtures.

Everything here is deterministic, so reruns only change bytes when the
package itself changes:

  tests/fixtures/transcript.jsonl   recorded reference run (plan, describe,
                                    seven scripts, editor, one debug turn)
  tests/fixtures/requirement.txt    the requirement the transcript answers
  tests/fixtures/debug_message.txt  the debug report the transcript answers
  tests/fixtures/debug_log.txt      compiler log attached to that report
  tests/fixtures/compile_log.txt    200-line mixed engine log
  tests/fixtures/compile_log_expected.json
                                    diagnostics the grammar must extract
  tests/golden/<kind>.cs            template output per standardized kind

Run from the repository root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "tests"))

import fakes  # noqa: E402

from unigen.blueprint import parse_blueprint, validate  # noqa: E402
from unigen.debugging import parse_compile_log  # noqa: E402
from unigen.generation import plan_script_set, template_generate  # noqa: E402
from unigen.runs import RunOptions, RunStore  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"
GOLDEN = REPO / "tests" / "golden"

DEBUG_MESSAGE = "the player cannot clear the spike gap"
DEBUG_LOG = ("Assets/Runtime/PlayerController.cs(12,5): error CS0103:"
             " The name 'jumpforce' does not exist in the current context")


def record_reference_transcript() -> None:
    """Run the scripted obstacle-run pipeline once in record mode and keep
    the transcript plus the exact inputs a replay must repeat."""
    with tempfile.TemporaryDirectory() as scratch:
        store = RunStore(Path(scratch) / "runs",
                         transport=fakes.ScriptedModel(fakes.obstacle_run_doc()))
        run_id = store.create_run(fakes.OBSTACLE_RUN_REQUIREMENT,
                                  RunOptions(gateway_mode="record"))
        run = store.advance(run_id, auto=True)
        if run.stage != "Assembled":
            raise SystemExit(f"reference run ended at {run.stage}: {run.error}")
        store.debug_message(run_id, DEBUG_MESSAGE, DEBUG_LOG)

        shutil.copyfile(store.run_dir(run_id) / "transcript.jsonl",
                        FIXTURES / "transcript.jsonl")
    (FIXTURES / "requirement.txt").write_text(
        fakes.OBSTACLE_RUN_REQUIREMENT, encoding="utf-8")
    (FIXTURES / "debug_message.txt").write_text(DEBUG_MESSAGE, encoding="utf-8")
    (FIXTURES / "debug_log.txt").write_text(DEBUG_LOG, encoding="utf-8")
    entries = (FIXTURES / "transcript.jsonl").read_text().splitlines()
    print(f"transcript.jsonl: {len(entries)} entries")


# Diagnostics planted in the mixed log, in order of appearance.
PLANTED = [
    ("Assets/Runtime/PlayerController.cs", 12, 5, "error", "CS0103",
     "The name 'jumpforce' does not exist in the current context"),
    ("Assets/Runtime/PlayerController.cs", 31, 9, "error", "CS1002",
     "; expected"),
    ("Assets/Runtime/GameManager.cs", 8, 18, "warning", "CS0414",
     "The field 'GameManager.roundsPlayed' is assigned but its value is never used"),
    ("Assets/Runtime/GameManager.cs", 44, 13, "error", "CS0029",
     "Cannot implicitly convert type 'string' to 'int'"),
    ("Assets/Runtime/UIManager.cs", 19, 26, "error", "CS0246",
     "The type or namespace name 'Txt' could not be found (are you missing a"
     " using directive or an assembly reference?)"),
    ("Assets/Editor/SceneBuilder.cs", 57, 21, "warning", "CS0618",
     "'PrefabUtility.InstantiatePrefab(Object)' is obsolete"),
    ("Assets/Editor/SceneBuilder.cs", 102, 1, "error", "CS1513",
     "} expected"),
    ("Assets/Runtime/CoinPickup.cs", 6, 30, "warning", "CS0649",
     "Field 'CoinPickup.spinAxis' is never assigned to, and will always have"
     " its default value"),
    ("Library/PackageCache/com.unity.ugui/Runtime/UI/Core/Text.cs", 210, 17,
     "warning", "CS0672",
     "Member 'Text.OnRebuildRequested()' overrides obsolete member"),
    ("Assets/Runtime/SpikeHazard.cs", 22, 9, "error", "CS0165",
     "Use of unassigned local variable 'other'"),
    ("Assets/Runtime/CameraFollow.cs", 15, 40, "error", "CS1061",
     "'Transform' does not contain a definition for 'positon'"),
    ("Assets/Runtime/GoalZone.cs", 27, 5, "warning", "CS0162",
     "Unreachable code detected"),
]

# Log chatter that must NOT match the diagnostic grammar: engine noise,
# stack frames, and near-misses that break exactly one rule each.
NOISE = [
    "Unity Editor version 2022.3.30f1 (LTS)",
    "[Licensing::Client] Successfully resolved entitlements",
    "-----CompilerOutput:-stdout-----",
    "Microsoft (R) Visual C# Compiler version 4.5.0",
    "Assets/Runtime/PlayerController.cs(12,5): Error CS0103: capitalized severity keyword",
    "Assets/Runtime/GameManager.cs(44,13): error cs0029: lowercase diagnostic code",
    "Assets/Runtime/UIManager.cs(19,26): error CS246: diagnostic code has three digits",
    "Assets/Runtime/CoinPickup.cs(0,30): warning CS0649: line number zero",
    "Assets/Runtime/SpikeHazard.cs(22,0): error CS0165: column number zero",
    "Assets/Editor/SceneBuilder.cs(57,21) warning CS0618: colon after position missing",
    "Assets/Runtime/CameraFollow.cs(15): error CS1061: column missing entirely",
    "  at UnityEditor.BuildPipeline.BuildPlayer (UnityEditor.BuildPlayerOptions options)",
    "  at UniGenGenerated.SceneBuilder.Build () [0x0002a]",
    "UnityEngine.Debug:LogError (object)",
    "Reloading assemblies after forced synchronous recompile.",
    "Refreshing native plugins compatible for Editor in 1.02 ms",
    "Start importing Assets/Scenes/Main.unity using Guid(9f2e) Importer(-1,)",
    "Compilation failed: 7 error(s), 5 warning(s)",
    "-----EndCompilerOutput---------",
    "Exiting batchmode successfully now!",
]


def build_compile_log() -> None:
    """Interleave the planted diagnostics with noise into exactly 200 lines,
    and write the sidecar the parser output must equal."""
    lines: list[str] = []
    noise_cursor = 0

    def add_noise(count: int) -> None:
        nonlocal noise_cursor
        for _ in range(count):
            lines.append(NOISE[noise_cursor % len(NOISE)])
            noise_cursor += 1

    for i, planted in enumerate(PLANTED):
        add_noise(3 if i % 2 else 2)
        path, line, col, severity, code, message = planted
        lines.append(f"{path}({line},{col}): {severity} {code}: {message}")
    add_noise(200 - len(lines))
    if len(lines) != 200:
        raise SystemExit(f"compile log has {len(lines)} lines, wanted 200")

    text = "\n".join(lines) + "\n"
    expected = [
        {"file": path, "line": line, "column": col,
         "severity": severity, "code": code, "message": message}
        for path, line, col, severity, code, message in PLANTED
    ]

    # The fixture must already satisfy its own contract before we commit it.
    parsed = parse_compile_log(text)
    assert [vars(d) | {} for d in parsed] == [
        {"file": e["file"], "line": e["line"], "column": e["column"],
         "severity": e["severity"], "code": e["code"], "message": e["message"]}
        for e in expected]
    for diagnostic in parsed:
        assert diagnostic.render() in lines

    (FIXTURES / "compile_log.txt").write_text(text, encoding="utf-8")
    (FIXTURES / "compile_log_expected.json").write_text(
        json.dumps(expected, indent=2) + "\n", encoding="utf-8")
    print(f"compile_log.txt: 200 lines, {len(expected)} diagnostics")


def build_golden_scripts() -> None:
    doc = fakes.golden_blueprint_doc()
    bp = parse_blueprint(json.dumps(doc))
    report = validate(bp)
    if report.diagnostics:
        raise SystemExit(f"golden blueprint is invalid: {report.diagnostics}")
    plans = plan_script_set(bp)
    kinds = {plan.kind for plan in plans}
    if len(plans) != 8 or len(kinds) != 8:
        raise SystemExit(f"expected 8 plans over 8 kinds, got {len(plans)}")
    for plan in plans:
        artifact = template_generate(plan, bp)
        (GOLDEN / f"{plan.kind}.cs").write_text(artifact.source, encoding="utf-8")
    print(f"golden: {len(plans)} template scripts")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    record_reference_transcript()
    build_compile_log()
    build_golden_scripts()


if __name__ == "__main__":
    main()
