"""Stage 4: error reports to hash-guarded, all-or-nothing multi-file patches.

Compile-log ingestion is lexical (one anchored grammar, non-matching lines
ignored); patches carry whole new file contents and are verified against the
current tree before a single byte is written.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .automation import (
    IoError,
    ProjectManifest,
    ManifestEntry,
    check_project_path,
    load_manifest,
    write_manifest,
    PathEscape,
)
from .blueprint import GameBlueprint, canonical_serialize
from .common import atomic_write_text, file_lock, sha256_text
from .gateway import (
    ChatMessage,
    ChatRequest,
    Gateway,
    NoJsonFound,
    UnrepairableJson,
    extract_json,
)
from .planning import MAX_ROUNDS
from .prompts import render_prompt

# Anchored per line: <path>(<line>,<col>): <severity> <CODE>: <message>
DIAGNOSTIC_RE = re.compile(
    r"^(?P<path>[^\n(]+?)\((?P<line>\d+),(?P<col>\d+)\): "
    r"(?P<severity>error|warning) (?P<code>[A-Z]{2}[0-9]{4}): (?P<message>.*)$"
)


class EmptyReport(Exception):
    """Neither a user message nor any diagnostics were supplied."""


class PatchTargetsUnknownFile(Exception):
    """Model insists on patching paths outside the manifest."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


class StaleBase(Exception):
    """Patch base hashes no longer match the tree; nothing was written."""

    def __init__(self, paths: list[str]):
        super().__init__("stale base for: " + ", ".join(paths))
        self.paths = paths


@dataclass(frozen=True)
class CompilerDiagnostic:
    file: str
    line: int
    column: int
    severity: str  # "error" | "warning"
    code: str
    message: str

    def render(self) -> str:
        return (f"{self.file}({self.line},{self.column}): "
                f"{self.severity} {self.code}: {self.message}")


@dataclass(frozen=True)
class ErrorContext:
    user_message: str
    diagnostics: tuple[CompilerDiagnostic, ...] = ()
    affected_files: tuple[str, ...] = ()


@dataclass(frozen=True)
class FilePatch:
    relative_path: str
    new_content: str
    base_hash: str | None = None  # None marks a new file


@dataclass(frozen=True)
class PatchSet:
    id: int
    files: tuple[FilePatch, ...]
    rationale: str

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "rationale": self.rationale,
            "files": [
                {"relativePath": f.relative_path,
                 "baseHash": f.base_hash,
                 "newContent": f.new_content}
                for f in self.files
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PatchSet":
        return cls(
            id=doc["id"],
            rationale=doc["rationale"],
            files=tuple(
                FilePatch(f["relativePath"], f["newContent"], f.get("baseHash"))
                for f in doc["files"]
            ),
        )


def parse_compile_log(text: str) -> list[CompilerDiagnostic]:
    """One diagnostic per matching line, order preserved, others ignored."""
    diagnostics = []
    for line in text.splitlines():
        match = DIAGNOSTIC_RE.match(line)
        if not match:
            continue
        line_no, col_no = int(match.group("line")), int(match.group("col"))
        if line_no < 1 or col_no < 1:
            continue
        diagnostics.append(CompilerDiagnostic(
            file=match.group("path"),
            line=line_no,
            column=col_no,
            severity=match.group("severity"),
            code=match.group("code"),
            message=match.group("message"),
        ))
    return diagnostics


def build_error_context(
    message: str,
    log_text: str | None,
    manifest: ProjectManifest,
) -> ErrorContext:
    diagnostics = tuple(parse_compile_log(log_text)) if log_text else ()
    manifest_paths = {e.relative_path for e in manifest.files}
    affected = []
    for diagnostic in diagnostics:
        if diagnostic.file in manifest_paths and diagnostic.file not in affected:
            affected.append(diagnostic.file)
    return ErrorContext(
        user_message=message.strip(),
        diagnostics=diagnostics,
        affected_files=tuple(affected),
    )


def propose_patch(
    ctx: ErrorContext,
    manifest: ProjectManifest,
    project_files: dict[str, str],
    bp: GameBlueprint,
    gateway: Gateway,
    patch_id: int,
) -> PatchSet:
    if not ctx.user_message and not ctx.diagnostics:
        raise EmptyReport("error report has no message and no diagnostics")

    messages = [
        ChatMessage("system", render_prompt("debugging.system")),
        ChatMessage("user", _debug_brief(ctx, manifest, project_files, bp)),
    ]
    problems: list[str] = []
    for _ in range(MAX_ROUNDS):
        response = gateway.complete(ChatRequest(
            model=gateway.model, messages=tuple(messages), json_mode=True))
        patch, problems = _parse_patch_response(
            response.content, manifest, project_files, patch_id)
        if patch is not None:
            return patch
        messages.append(ChatMessage("assistant", response.content))
        messages.append(ChatMessage("user", render_prompt(
            "debugging.repair", diagnostics="\n".join(f"- {p}" for p in problems))))
    raise PatchTargetsUnknownFile(problems)


def _debug_brief(
    ctx: ErrorContext,
    manifest: ProjectManifest,
    project_files: dict[str, str],
    bp: GameBlueprint,
) -> str:
    lines = ["Error report:", ctx.user_message or "(no message)"]
    if ctx.diagnostics:
        lines.append("")
        lines.append("Compiler diagnostics:")
        lines.extend(d.render() for d in ctx.diagnostics)
    lines.append("")
    lines.append("Project file listing:")
    lines.extend(f"- {e.relative_path}" for e in manifest.files)
    shown = ctx.affected_files or tuple(sorted(project_files))
    for path in shown:
        content = project_files.get(path)
        if content is None:
            continue
        lines.append("")
        lines.append(f"===== {path} =====")
        lines.append(content.rstrip("\n"))
    lines.append("")
    lines.append("Game blueprint:")
    lines.append(canonical_serialize(bp).rstrip("\n"))
    return "\n".join(lines)


def _parse_patch_response(
    content: str,
    manifest: ProjectManifest,
    project_files: dict[str, str],
    patch_id: int,
) -> tuple[PatchSet | None, list[str]]:
    try:
        doc = extract_json(content)
    except (NoJsonFound, UnrepairableJson) as exc:
        return None, [f"response is not a JSON patch: {exc}"]
    if not isinstance(doc, dict):
        return None, ["patch must be a JSON object"]

    problems = []
    rationale = doc.get("rationale")
    if not isinstance(rationale, str) or not rationale.strip():
        problems.append("rationale must be a nonempty string")
    raw_files = doc.get("files")
    if not isinstance(raw_files, list) or not raw_files:
        problems.append("files must be a nonempty array")
        return None, problems

    manifest_paths = {e.relative_path for e in manifest.files}
    patches = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_files):
        if not isinstance(raw, dict) or not isinstance(raw.get("path"), str) \
                or not isinstance(raw.get("content"), str):
            problems.append(f"files[{i}] must carry string path and content")
            continue
        path = raw["path"]
        try:
            path = check_project_path(path)
        except PathEscape:
            problems.append(f"files[{i}] path {path!r} leaves Assets/")
            continue
        if path in seen:
            problems.append(f"files[{i}] duplicates path {path!r}")
            continue
        seen.add(path)
        new_file = bool(raw.get("newFile"))
        if path in manifest_paths:
            base_hash = sha256_text(project_files[path])
            patches.append(FilePatch(path, raw["content"], base_hash))
        elif new_file:
            patches.append(FilePatch(path, raw["content"], None))
        else:
            problems.append(
                f"files[{i}] patches unknown path {path!r} without newFile flag")
    if problems:
        return None, problems
    return PatchSet(id=patch_id, files=tuple(patches), rationale=rationale.strip()), []


def apply_patch(run_dir: Path, patch: PatchSet) -> ProjectManifest:
    """Verify every base hash, then write every file; on any mismatch write
    nothing. Successful patches are persisted under patches/<id>.json."""
    run_dir = Path(run_dir)
    project_dir = run_dir / "project"
    with file_lock(run_dir / "project.lock"):
        manifest = load_manifest(project_dir)
        by_path = {e.relative_path: e for e in manifest.files}

        stale = []
        for file_patch in patch.files:
            path = check_project_path(file_patch.relative_path)
            target = project_dir / path
            if file_patch.base_hash is None:
                if path in by_path or target.exists():
                    stale.append(path)
                continue
            if not target.exists():
                stale.append(path)
                continue
            current = sha256_text(target.read_text(encoding="utf-8"))
            if current != file_patch.base_hash:
                stale.append(path)
        if stale:
            raise StaleBase(stale)

        for file_patch in patch.files:
            target = project_dir / file_patch.relative_path
            try:
                atomic_write_text(target, file_patch.new_content)
            except OSError as exc:
                raise IoError(str(target), exc) from exc
            by_path[file_patch.relative_path] = ManifestEntry(
                relative_path=file_patch.relative_path,
                content_hash=sha256_text(file_patch.new_content),
                origin="patched",
            )

        updated = ProjectManifest(
            root_path=manifest.root_path,
            files=tuple(sorted(by_path.values(), key=lambda e: e.relative_path)),
            created_at=manifest.created_at,
        )
        write_manifest(project_dir / "manifest.json", updated)

        patch_path = run_dir / "patches" / f"{patch.id}.json"
        atomic_write_text(
            patch_path, json.dumps(patch.to_json(), indent=2, ensure_ascii=False) + "\n")
        return updated
