from __future__ import annotations

import json

import pytest

import fakes
from unigen.cli import main
from unigen.evaluation import InteractionMatrix, MatrixEntry, save_matrix
from unigen.runs import RunOptions, RunStore

DEBUG_MESSAGE = "the player cannot clear the spike gap"
PLAYER_LOG = ("Assets/Runtime/PlayerController.cs(12,5): error CS0103:"
              " The name 'jumpforce' does not exist in the current context")


@pytest.fixture(scope="module")
def transcript(tmp_path_factory):
    """One recorded reference run whose transcript the CLI tests replay."""
    root = tmp_path_factory.mktemp("recorded")
    store = RunStore(root / "runs",
                     transport=fakes.ScriptedModel(fakes.obstacle_run_doc()))
    run_id = store.create_run(fakes.OBSTACLE_RUN_REQUIREMENT,
                              RunOptions(gateway_mode="record"))
    store.advance(run_id, auto=True)
    store.debug_message(run_id, DEBUG_MESSAGE, PLAYER_LOG)
    return store.run_dir(run_id) / "transcript.jsonl"


def replay_args(tmp_path, transcript) -> list[str]:
    return ["--runs-dir", str(tmp_path / "runs"),
            "--llm", "replay", "--transcript", str(transcript)]


class TestNew:
    def test_prints_the_new_run_id(self, tmp_path, capsys):
        assert main(["new", "a game", "--runs-dir", str(tmp_path / "runs")]) == 0
        assert capsys.readouterr().out == "0001\n"

    def test_blank_requirement_exits_2(self, tmp_path, capsys):
        code = main(["new", "   ", "--runs-dir", str(tmp_path / "runs")])
        assert code == 2
        captured = capsys.readouterr()
        assert captured.out == ""
        assert captured.err.startswith("error:")


class TestRun:
    def test_replay_to_assembled(self, tmp_path, transcript, capsys):
        code = main(["run", fakes.OBSTACLE_RUN_REQUIREMENT,
                     *replay_args(tmp_path, transcript)])
        assert code == 0
        assert capsys.readouterr().out == "0001 Assembled\n"
        project = tmp_path / "runs/0001/project"
        assert (project / "Assets/Editor/SceneBuilder.cs").exists()
        assert (project / "manifest.json").exists()

    def test_common_flags_work_before_the_subcommand(
            self, tmp_path, transcript, capsys):
        code = main([*replay_args(tmp_path, transcript),
                     "run", fakes.OBSTACLE_RUN_REQUIREMENT])
        assert code == 0
        assert capsys.readouterr().out == "0001 Assembled\n"

    def test_replay_miss_fails_the_run_and_exits_1(
            self, tmp_path, transcript, capsys):
        code = main(["run", "a game the transcript has never seen",
                     *replay_args(tmp_path, transcript)])
        assert code == 1
        captured = capsys.readouterr()
        assert captured.out == "0001 Failed\n"
        assert "error at Planned:" in captured.err

    def test_replay_without_transcript_exits_2(self, tmp_path, capsys):
        code = main(["run", "a game", "--runs-dir", str(tmp_path / "runs"),
                     "--llm", "replay"])
        assert code == 2
        assert "replay mode requires --transcript" in capsys.readouterr().err


class TestAdvance:
    def test_single_steps_then_auto(self, tmp_path, transcript, capsys):
        main(["new", fakes.OBSTACLE_RUN_REQUIREMENT,
              *replay_args(tmp_path, transcript)])
        capsys.readouterr()
        runs_dir = ["--runs-dir", str(tmp_path / "runs")]
        assert main(["advance", "0001", *runs_dir]) == 0
        assert capsys.readouterr().out == "0001 Planned\n"
        assert main(["advance", "0001", "--auto", *runs_dir]) == 0
        assert capsys.readouterr().out == "0001 Assembled\n"
        assert main(["advance", "0001", *runs_dir]) == 0
        assert capsys.readouterr().out == "0001 Done\n"
        assert main(["advance", "0001", *runs_dir]) == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_run_exits_2(self, tmp_path, capsys):
        code = main(["advance", "7777", "--runs-dir", str(tmp_path / "runs")])
        assert code == 2
        assert "7777" in capsys.readouterr().err


class TestDebug:
    def test_patch_round_trip(self, tmp_path, transcript, capsys):
        main(["run", fakes.OBSTACLE_RUN_REQUIREMENT,
              *replay_args(tmp_path, transcript)])
        capsys.readouterr()
        log_file = tmp_path / "compile.log"
        log_file.write_text(PLAYER_LOG, encoding="utf-8")
        code = main(["debug", "0001", "--message", DEBUG_MESSAGE,
                     "--log", str(log_file),
                     "--runs-dir", str(tmp_path / "runs")])
        assert code == 0
        assert capsys.readouterr().out == \
            "patch 1 applied: Assets/Runtime/PlayerController.cs\n"
        patched = (tmp_path / "runs/0001/project/Assets/Runtime/"
                   "PlayerController.cs").read_text(encoding="utf-8")
        assert "public float jumpForce = 9f;" in patched

    def test_empty_report_exits_1(self, tmp_path, transcript, capsys):
        main(["run", fakes.OBSTACLE_RUN_REQUIREMENT,
              *replay_args(tmp_path, transcript)])
        capsys.readouterr()
        code = main(["debug", "0001", "--message", "  ",
                     "--runs-dir", str(tmp_path / "runs")])
        assert code == 1
        assert "debug failed:" in capsys.readouterr().err

    def test_debug_before_assembly_exits_2(self, tmp_path, transcript, capsys):
        main(["new", fakes.OBSTACLE_RUN_REQUIREMENT,
              *replay_args(tmp_path, transcript)])
        capsys.readouterr()
        code = main(["debug", "0001", "--message", "too early",
                     "--runs-dir", str(tmp_path / "runs")])
        assert code == 2
        assert "error:" in capsys.readouterr().err


class TestEval:
    def write_matrix(self, tmp_path, results) -> str:
        entries = tuple(MatrixEntry(f"i{n}", f"check {n}", result)
                        for n, result in enumerate(results, start=1))
        path = tmp_path / "matrix.json"
        save_matrix(InteractionMatrix("Obstacle Run", entries), path)
        return str(path)

    def test_complete_matrix_prints_the_score(self, tmp_path, capsys):
        path = self.write_matrix(tmp_path, ["pass"] * 15 + ["fail"])
        assert main(["eval", "--matrix", path]) == 0
        out = capsys.readouterr().out
        assert out.startswith("Obstacle Run\n")
        assert out.endswith("completeness: 93.8%\n")

    def test_pending_matrix_exits_1(self, tmp_path, capsys):
        path = self.write_matrix(tmp_path, ["pass", "pending"])
        assert main(["eval", "--matrix", path]) == 1
        assert "completeness: undefined (1 pending)" in capsys.readouterr().out

    def test_duplicate_id_exits_2(self, tmp_path, capsys):
        path = tmp_path / "matrix.json"
        path.write_text(json.dumps({"gameName": "g", "entries": [
            {"id": "i1", "description": "a", "result": "pass"},
            {"id": "i1", "description": "b", "result": "pass"},
        ]}), encoding="utf-8")
        assert main(["eval", "--matrix", str(path)]) == 2
        assert "duplicate id" in capsys.readouterr().err

    def test_csv_flag(self, tmp_path, capsys):
        path = tmp_path / "matrix.txt"
        path.write_text("id,description,result\n"
                        "i1,coin adds a point,pass\n"
                        "i2,spike ends the run,pass\n", encoding="utf-8")
        assert main(["eval", "--matrix", str(path), "--csv"]) == 0
        assert "completeness: 100.0%" in capsys.readouterr().out
