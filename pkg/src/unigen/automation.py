"""Stage 3: scene-builder emission and project tree assembly.

assemble_project owns the bit-exact output contract: runtime scripts under
Assets/Runtime, editor scripts and support assets under Assets/Editor (the
reflection helper lands in Assets/Runtime so runtime code can see it), and a
manifest whose hashes match disk. Assembly is idempotent and path-safe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from importlib import resources
from pathlib import Path, PurePosixPath

from .blueprint import GameBlueprint
from .common import (
    atomic_write_text,
    file_lock,
    isoformat_utc,
    sha256_text,
    utc_now,
)
from .csharp_templates import MENU_ENTRY_NAME, render_scene_builder
from .gateway import ChatMessage, ChatRequest, Gateway, extract_code_block
from .generation import ScriptArtifact, ScriptPlan, plan_script_set
from .prompts import render_prompt

EDITOR_DIR = "Assets/Editor"
RUNTIME_DIR = "Assets/Runtime"
BATCH_ENTRY_POINT = "UniGenGenerated.SceneBuilder.BuildAndExit"

# relativePath inside the assembled project per bundled support asset. The
# reflection helper must be compile-visible to runtime code, so it lives in
# the runtime tree even though only editor code calls it.
SUPPORT_ASSET_PATHS = {
    "ReflectionHelper.cs": f"{RUNTIME_DIR}/ReflectionHelper.cs",
    "SceneBuildEntry.cs": f"{EDITOR_DIR}/SceneBuildEntry.cs",
    "CompileLogCapture.cs": f"{EDITOR_DIR}/CompileLogCapture.cs",
}


class PathEscape(Exception):
    """An artifact path points outside the Assets/ tree."""

    def __init__(self, path: str):
        super().__init__(f"path escapes the project tree: {path}")
        self.path = path


class IoError(Exception):
    """Filesystem operation failed; carries the failing path."""

    def __init__(self, path: str, cause: Exception):
        super().__init__(f"{path}: {cause}")
        self.path = path
        self.cause = cause


@dataclass(frozen=True)
class EditorScriptArtifact:
    path: str
    type_name: str
    role: str
    source: str
    content_hash: str
    menu_entry_name: str
    batch_entry_point: str


@dataclass(frozen=True)
class ManifestEntry:
    relative_path: str
    content_hash: str
    origin: str  # "generated" | "support" | "patched"


@dataclass(frozen=True)
class ProjectManifest:
    root_path: str
    files: tuple[ManifestEntry, ...]
    created_at: str

    def entry(self, relative_path: str) -> ManifestEntry | None:
        for e in self.files:
            if e.relative_path == relative_path:
                return e
        return None

    def to_json(self) -> dict:
        return {
            "rootPath": self.root_path,
            "createdAt": self.created_at,
            "files": [
                {"relativePath": e.relative_path,
                 "contentHash": e.content_hash,
                 "origin": e.origin}
                for e in self.files
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ProjectManifest":
        return cls(
            root_path=doc["rootPath"],
            created_at=doc["createdAt"],
            files=tuple(
                ManifestEntry(f["relativePath"], f["contentHash"], f["origin"])
                for f in doc["files"]
            ),
        )


def support_assets() -> dict[str, str]:
    """relativePath -> source for the bundled engine-side assets."""
    package = resources.files("unigen")
    assets = {}
    for name, relative_path in SUPPORT_ASSET_PATHS.items():
        assets[relative_path] = package.joinpath(f"support/{name}").read_text(encoding="utf-8")
    return assets


def generate_editor_script(
    bp: GameBlueprint,
    artifacts: list[ScriptArtifact],
    gateway: Gateway | None = None,
    plans: list[ScriptPlan] | None = None,
) -> EditorScriptArtifact:
    """Template mode (default, gateway None) renders the builder directly;
    model mode asks the gateway but keeps the same artifact contract."""
    if plans is None:
        plans = plan_script_set(bp)
    if gateway is None:
        source = render_scene_builder(bp, plans)
    else:
        response = gateway.complete(ChatRequest(
            model=gateway.model,
            messages=(
                ChatMessage("system", render_prompt("generation.system")),
                ChatMessage("user", _builder_brief(bp, plans)),
            ),
        ))
        source = extract_code_block(response.content)
        if source and not source.endswith("\n"):
            source += "\n"
    return EditorScriptArtifact(
        path=f"{EDITOR_DIR}/SceneBuilder.cs",
        type_name="SceneBuilder",
        role="editor",
        source=source,
        content_hash=sha256_text(source),
        menu_entry_name=MENU_ENTRY_NAME,
        batch_entry_point=BATCH_ENTRY_POINT,
    )


def _builder_brief(bp: GameBlueprint, plans: list[ScriptPlan]) -> str:
    from .blueprint import canonical_serialize

    attach = "\n".join(
        f"- {p.type_name} on entity {p.entity_id or '(new holder object)'}"
        for p in plans)
    return (
        "Write the Unity editor script SceneBuilder.cs in namespace"
        " UniGenGenerated as a public static class SceneBuilder with a"
        f" [MenuItem(\"{MENU_ENTRY_NAME}\")] static Build() method and a"
        " static BuildAndExit() method that calls Build and exits 0 (1 on"
        " error). Build must create one GameObject per blueprint entity"
        " (marker comment \"// ENTITY <id>\" before each), attach these"
        f" components:\n{attach}\nbind all script fields exclusively via"
        " UniGenSupport.ReflectionHelper.SetFieldSafe, create one main"
        " camera and one directional light, and save the scene to"
        " Assets/Scenes/Main.unity.\n\nFull game blueprint:\n"
        + canonical_serialize(bp).rstrip("\n")
    )


def check_project_path(relative_path: str) -> str:
    """Normalize and reject anything that leaves Assets/."""
    pure = PurePosixPath(relative_path)
    if pure.is_absolute() or ".." in pure.parts or not pure.parts:
        raise PathEscape(relative_path)
    if pure.parts[0] != "Assets":
        raise PathEscape(relative_path)
    return str(pure)


def assemble_project(
    run_dir: Path,
    bp: GameBlueprint,
    artifacts: list[ScriptArtifact],
    editor_artifact: EditorScriptArtifact,
    created_at: datetime | None = None,
) -> ProjectManifest:
    """Write the full project tree and its manifest, atomically per file.

    Idempotent: unchanged files are left untouched, and an existing manifest
    whose file set matches keeps its original createdAt so reassembly is
    byte-stable.
    """
    project_dir = Path(run_dir) / "project"
    planned: list[tuple[str, str, str]] = []  # (relativePath, source, origin)
    for artifact in artifacts:
        planned.append((check_project_path(artifact.path), artifact.source, "generated"))
    planned.append((check_project_path(editor_artifact.path),
                    editor_artifact.source, "generated"))
    for relative_path, source in support_assets().items():
        planned.append((check_project_path(relative_path), source, "support"))

    seen: set[str] = set()
    for relative_path, _, _ in planned:
        if relative_path in seen:
            raise PathEscape(f"duplicate project path: {relative_path}")
        seen.add(relative_path)

    with file_lock(project_dir.parent / "project.lock"):
        for relative_path, source, _ in planned:
            target = project_dir / relative_path
            try:
                if not (target.exists() and target.read_text(encoding="utf-8") == source):
                    atomic_write_text(target, source)
            except OSError as exc:
                raise IoError(str(target), exc) from exc

        entries = tuple(
            ManifestEntry(relative_path, sha256_text(source), origin)
            for relative_path, source, origin in sorted(planned)
        )
        manifest = ProjectManifest(
            root_path="project",
            files=entries,
            created_at=isoformat_utc(created_at or utc_now()),
        )
        manifest_path = project_dir / "manifest.json"
        if manifest_path.exists():
            previous = ProjectManifest.from_json(
                json.loads(manifest_path.read_text(encoding="utf-8")))
            if previous.files == entries and previous.root_path == manifest.root_path:
                return previous
        try:
            write_manifest(manifest_path, manifest)
        except OSError as exc:
            raise IoError(str(manifest_path), exc) from exc
        return manifest


def write_manifest(path: Path, manifest: ProjectManifest) -> None:
    atomic_write_text(path, json.dumps(manifest.to_json(), indent=2, ensure_ascii=False) + "\n")


def load_manifest(project_dir: Path) -> ProjectManifest:
    path = Path(project_dir) / "manifest.json"
    return ProjectManifest.from_json(json.loads(path.read_text(encoding="utf-8")))
