"""Run lifecycle: file-backed state machine over the four pipeline stages.

Everything lives under runs/<id>/ as plain files. Writers hold a per-run
lock; stage in run.json is updated only after a stage's artifacts are fully
persisted, so a crash leaves a consistent directory. Replay-mode runs embed
a fixed epoch timestamp in project artifacts so replays are byte-identical.
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass, replace
from pathlib import Path

from . import automation, debugging, generation, planning
from .blueprint import GameBlueprint, canonical_serialize, parse_blueprint
from .common import (
    REPLAY_EPOCH,
    atomic_write_text,
    file_lock,
    isoformat_utc,
    utc_now,
)
from .gateway import Gateway, Transport
from .generation import ScriptArtifact
from .planning import EmptyRequirement, LogicDescription

STAGES = ("Created", "Planned", "Described", "Generated", "Assembled",
          "Debugging", "Done", "Failed")
_NEXT_STAGE = {
    "Created": "Planned",
    "Planned": "Described",
    "Described": "Generated",
    "Generated": "Assembled",
    "Assembled": "Done",
}
_AUTO_STOP = {"Assembled", "Done", "Failed"}

DEFAULT_MODEL = "gpt-4.1"


class UnknownRun(Exception):
    def __init__(self, run_id: str):
        super().__init__(f"no run {run_id}")
        self.run_id = run_id


class TerminalRun(Exception):
    """Run already reached Done or Failed."""


class WrongStage(Exception):
    """Operation not legal at the run's current stage."""


class UnknownFile(Exception):
    """Requested run file does not exist."""


@dataclass(frozen=True)
class RunOptions:
    codegen_mode: str = "llm"      # "llm" | "template"
    gateway_mode: str = "live"     # "live" | "record" | "replay"
    transcript: Path | None = None  # replay source, copied into the run
    model: str | None = None


@dataclass(frozen=True)
class PipelineRun:
    id: str
    requirement: str
    stage: str
    created_at: str
    updated_at: str
    codegen_mode: str
    gateway_mode: str
    model: str
    error: dict | None = None

    def to_json(self) -> dict:
        doc = {
            "id": self.id,
            "requirement": self.requirement,
            "stage": self.stage,
            "createdAt": self.created_at,
            "updatedAt": self.updated_at,
            "codegenMode": self.codegen_mode,
            "gatewayMode": self.gateway_mode,
            "model": self.model,
            "error": self.error,
        }
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "PipelineRun":
        return cls(
            id=doc["id"],
            requirement=doc["requirement"],
            stage=doc["stage"],
            created_at=doc["createdAt"],
            updated_at=doc["updatedAt"],
            codegen_mode=doc["codegenMode"],
            gateway_mode=doc["gatewayMode"],
            model=doc.get("model", DEFAULT_MODEL),
            error=doc.get("error"),
        )


@dataclass(frozen=True)
class RunEvent:
    seq: int
    timestamp: str
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"seq": self.seq, "timestamp": self.timestamp,
                "kind": self.kind, "payload": self.payload}

    @classmethod
    def from_json(cls, doc: dict) -> "RunEvent":
        return cls(doc["seq"], doc["timestamp"], doc["kind"], doc["payload"])


class RunStore:
    def __init__(self, runs_dir: Path, transport: Transport | None = None):
        self.runs_dir = Path(runs_dir)
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        self._transport = transport  # live/record override, mainly for tests

    # -- paths ------------------------------------------------------------

    def run_dir(self, run_id: str) -> Path:
        return self.runs_dir / run_id

    def _run_json(self, run_id: str) -> Path:
        return self.run_dir(run_id) / "run.json"

    def _lock(self, run_id: str):
        return file_lock(self.run_dir(run_id) / "run.lock")

    # -- id allocation ----------------------------------------------------

    def _allocate_id(self) -> str:
        counter = self.runs_dir / "next-id"
        with file_lock(self.runs_dir / "next-id.lock"):
            value = 1
            if counter.exists():
                value = int(counter.read_text(encoding="utf-8").strip() or "1")
            counter.write_text(f"{value + 1}\n", encoding="utf-8")
        return f"{value:04d}"

    # -- creation ---------------------------------------------------------

    def create_run(self, requirement: str, options: RunOptions = RunOptions()) -> str:
        if not requirement.strip():
            raise EmptyRequirement("requirement is empty")
        run_id = self._allocate_id()
        run_dir = self.run_dir(run_id)
        run_dir.mkdir(parents=True)
        atomic_write_text(run_dir / "requirement.txt", requirement)
        if options.transcript is not None:
            shutil.copyfile(options.transcript, run_dir / "transcript.jsonl")
        now = isoformat_utc(utc_now())
        run = PipelineRun(
            id=run_id,
            requirement=requirement,
            stage="Created",
            created_at=now,
            updated_at=now,
            codegen_mode=options.codegen_mode,
            gateway_mode=options.gateway_mode,
            model=options.model or DEFAULT_MODEL,
        )
        self._write_run(run)
        self._append_event(run_id, "stageStarted", {"stage": "Created"})
        return run_id

    # -- reads ------------------------------------------------------------

    def get_run(self, run_id: str) -> PipelineRun:
        path = self._run_json(run_id)
        if not path.exists():
            raise UnknownRun(run_id)
        return PipelineRun.from_json(json.loads(path.read_text(encoding="utf-8")))

    def list_runs(self) -> list[PipelineRun]:
        runs = []
        for run_json in sorted(self.runs_dir.glob("*/run.json")):
            runs.append(PipelineRun.from_json(
                json.loads(run_json.read_text(encoding="utf-8"))))
        return runs

    def events(self, run_id: str, since: int = 0) -> list[RunEvent]:
        if not self._run_json(run_id).exists():
            raise UnknownRun(run_id)
        path = self.run_dir(run_id) / "events.jsonl"
        if not path.exists():
            return []
        events = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                event = RunEvent.from_json(json.loads(line))
                if event.seq > since:
                    events.append(event)
        return events

    def list_files(self, run_id: str) -> list[str]:
        run_dir = self.run_dir(run_id)
        if not self._run_json(run_id).exists():
            raise UnknownRun(run_id)
        paths = []
        for path in sorted(run_dir.rglob("*")):
            if path.is_file() and not path.name.endswith(".lock"):
                paths.append(path.relative_to(run_dir).as_posix())
        return paths

    def read_file(self, run_id: str, relative_path: str) -> str:
        run_dir = self.run_dir(run_id)
        if not self._run_json(run_id).exists():
            raise UnknownRun(run_id)
        target = (run_dir / relative_path).resolve()
        if run_dir.resolve() not in target.parents and target != run_dir.resolve():
            raise UnknownFile(relative_path)
        if not target.is_file():
            raise UnknownFile(relative_path)
        return target.read_text(encoding="utf-8")

    # -- stage execution ----------------------------------------------------

    def advance(self, run_id: str, auto: bool = False) -> PipelineRun:
        run = self.advance_once(run_id)
        while auto and run.stage not in _AUTO_STOP:
            run = self.advance_once(run_id)
        return run

    def advance_once(self, run_id: str) -> PipelineRun:
        with self._lock(run_id):
            run = self.get_run(run_id)
            if run.stage in ("Done", "Failed"):
                raise TerminalRun(f"run {run_id} is {run.stage}")
            if run.stage == "Debugging":
                raise WrongStage("run is being debugged")
            target = _NEXT_STAGE[run.stage]
            self._append_event(run_id, "stageStarted", {"stage": target})
            try:
                self._execute_stage(run, target)
            except Exception as exc:
                run = replace(run, stage="Failed",
                              error={"stage": target, "message": str(exc)},
                              updated_at=self._now_after(run))
                self._write_run(run)
                self._append_event(run_id, "failed",
                                   {"stage": target, "message": str(exc)})
                return run
            run = replace(run, stage=target, updated_at=self._now_after(run))
            self._write_run(run)
            self._append_event(run_id, "stageCompleted", {"stage": target})
            return run

    def _execute_stage(self, run: PipelineRun, target: str) -> None:
        run_dir = self.run_dir(run.id)
        if target == "Planned":
            bp = planning.interpret_requirement(run.requirement, self._gateway(run))
            atomic_write_text(run_dir / "blueprint.json", canonical_serialize(bp))
        elif target == "Described":
            bp = self._blueprint(run.id)
            desc = planning.generate_logic_description(bp, self._gateway(run))
            atomic_write_text(run_dir / "description.md", desc.markdown)
        elif target == "Generated":
            bp = self._blueprint(run.id)
            desc = self._description(run.id, bp)
            if run.codegen_mode == "template":
                artifacts = [generation.template_generate(plan, bp)
                             for plan in generation.plan_script_set(bp)]
            else:
                artifacts = generation.generate_scripts(bp, desc, self._gateway(run))
            self._write_scripts(run.id, artifacts)
        elif target == "Assembled":
            bp = self._blueprint(run.id)
            artifacts = self._artifacts(run.id)
            gateway = self._gateway(run) if run.codegen_mode == "llm" else None
            editor = automation.generate_editor_script(bp, artifacts, gateway=gateway)
            created_at = REPLAY_EPOCH if run.gateway_mode == "replay" else None
            automation.assemble_project(
                run_dir, bp, artifacts, editor, created_at=created_at)
        elif target == "Done":
            pass  # finalization: no artifacts beyond Assembled
        else:  # pragma: no cover - stage map is exhaustive
            raise WrongStage(f"no executable stage after {run.stage}")

    # -- debugging ----------------------------------------------------------

    def debug_message(self, run_id: str, message: str,
                      log_text: str | None = None) -> dict:
        with self._lock(run_id):
            run = self.get_run(run_id)
            if run.stage not in ("Assembled", "Debugging"):
                raise WrongStage(f"debug requires an assembled run, not {run.stage}")
            busy = replace(run, stage="Debugging", updated_at=self._now_after(run))
            self._write_run(busy)
            self._append_event(run_id, "debugMessage",
                               {"message": message, "hasLog": bool(log_text)})
            try:
                summary = self._run_debug_turn(busy, message, log_text)
                self._append_event(run_id, "patchApplied", summary)
                return summary
            finally:
                done = replace(busy, stage="Assembled",
                               updated_at=self._now_after(busy))
                self._write_run(done)

    def _run_debug_turn(self, run: PipelineRun, message: str,
                        log_text: str | None) -> dict:
        run_dir = self.run_dir(run.id)
        project_dir = run_dir / "project"
        manifest = automation.load_manifest(project_dir)
        ctx = debugging.build_error_context(message, log_text, manifest)
        if ctx.diagnostics:
            self._append_event(run.id, "diagnostic", {
                "count": len(ctx.diagnostics),
                "first": ctx.diagnostics[0].render(),
            })
        project_files = {
            entry.relative_path:
                (project_dir / entry.relative_path).read_text(encoding="utf-8")
            for entry in manifest.files
        }
        bp = self._blueprint(run.id)
        patch_id = self._next_patch_id(run.id)
        patch = debugging.propose_patch(
            ctx, manifest, project_files, bp, self._gateway(run), patch_id)
        debugging.apply_patch(run_dir, patch)
        return {
            "patchId": patch.id,
            "changedPaths": [f.relative_path for f in patch.files],
        }

    def _next_patch_id(self, run_id: str) -> int:
        patches_dir = self.run_dir(run_id) / "patches"
        if not patches_dir.is_dir():
            return 1
        highest = 0
        for path in patches_dir.glob("*.json"):
            try:
                highest = max(highest, int(path.stem))
            except ValueError:
                continue
        return highest + 1

    # -- helpers ------------------------------------------------------------

    def _gateway(self, run: PipelineRun) -> Gateway:
        transcript = None
        if run.gateway_mode in ("record", "replay"):
            transcript = self.run_dir(run.id) / "transcript.jsonl"
        return Gateway(
            mode=run.gateway_mode,
            transcript_path=transcript,
            transport=self._transport,
            model=run.model,
        )

    def _blueprint(self, run_id: str) -> GameBlueprint:
        text = (self.run_dir(run_id) / "blueprint.json").read_text(encoding="utf-8")
        return parse_blueprint(text)

    def _description(self, run_id: str, bp: GameBlueprint) -> LogicDescription:
        from .blueprint import blueprint_hash

        markdown = (self.run_dir(run_id) / "description.md").read_text(encoding="utf-8")
        return LogicDescription(markdown=markdown,
                                source_blueprint_hash=blueprint_hash(bp))

    def _write_scripts(self, run_id: str, artifacts: list[ScriptArtifact]) -> None:
        scripts_dir = self.run_dir(run_id) / "scripts"
        for artifact in artifacts:
            atomic_write_text(scripts_dir / f"{artifact.type_name}.cs", artifact.source)
        listing = {
            "scripts": [
                {"path": a.path, "typeName": a.type_name, "contentHash": a.content_hash}
                for a in artifacts
            ],
        }
        atomic_write_text(scripts_dir / "manifest.json",
                          json.dumps(listing, indent=2, ensure_ascii=False) + "\n")

    def _artifacts(self, run_id: str) -> list[ScriptArtifact]:
        scripts_dir = self.run_dir(run_id) / "scripts"
        listing = json.loads((scripts_dir / "manifest.json").read_text(encoding="utf-8"))
        artifacts = []
        for row in listing["scripts"]:
            source = (scripts_dir / f"{row['typeName']}.cs").read_text(encoding="utf-8")
            artifacts.append(ScriptArtifact.create(
                path=row["path"], type_name=row["typeName"],
                role="runtime", source=source))
        return artifacts

    def _write_run(self, run: PipelineRun) -> None:
        atomic_write_text(
            self._run_json(run.id),
            json.dumps(run.to_json(), indent=2, ensure_ascii=False) + "\n")

    def _now_after(self, run: PipelineRun) -> str:
        now = isoformat_utc(utc_now())
        return max(now, run.updated_at)

    def _append_event(self, run_id: str, kind: str, payload: dict) -> None:
        path = self.run_dir(run_id) / "events.jsonl"
        seq = 1
        if path.exists():
            seq = sum(1 for line in
                      path.read_text(encoding="utf-8").splitlines() if line.strip()) + 1
        event = RunEvent(seq=seq, timestamp=isoformat_utc(utc_now()),
                         kind=kind, payload=payload)
        with open(path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(event.to_json(), ensure_ascii=False) + "\n")
        return None
