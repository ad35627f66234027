from __future__ import annotations

import json

import pytest

from unigen.automation import (
    SUPPORT_ASSET_PATHS,
    PathEscape,
    assemble_project,
    check_project_path,
    generate_editor_script,
    load_manifest,
    support_assets,
    write_manifest,
)
from unigen.common import sha256_text
from unigen.gateway import Gateway
from unigen.generation import generate_scripts, plan_script_set, template_generate

from fakes import ScriptedModel


@pytest.fixture
def artifacts(obstacle_bp):
    return [template_generate(p, obstacle_bp) for p in plan_script_set(obstacle_bp)]


@pytest.fixture
def editor(obstacle_bp, artifacts):
    return generate_editor_script(obstacle_bp, artifacts)


class TestSupportAssets:
    def test_three_assets_ship_with_the_package(self):
        assets = support_assets()
        assert sorted(assets) == sorted(SUPPORT_ASSET_PATHS.values())
        assert len(assets) == 3

    def test_every_asset_carries_the_version_header(self):
        for path, content in support_assets().items():
            first_line = content.splitlines()[0]
            assert first_line.startswith("// unigen-support v1.0.0"), path
            assert "do not edit" in first_line

    def test_helper_surface(self):
        helper = support_assets()["Assets/Runtime/ReflectionHelper.cs"]
        assert "namespace UniGenSupport" in helper
        assert "public static bool SetFieldSafe" in helper
        assert "public static bool SetTagSafe" in helper
        assert "catch" in helper  # never throws back into callers

    def test_editor_assets_live_under_the_editor_folder(self):
        assert SUPPORT_ASSET_PATHS["SceneBuildEntry.cs"].startswith("Assets/Editor/")
        assert SUPPORT_ASSET_PATHS["CompileLogCapture.cs"].startswith("Assets/Editor/")
        assert SUPPORT_ASSET_PATHS["ReflectionHelper.cs"].startswith("Assets/Runtime/")


class TestProjectPaths:
    @pytest.mark.parametrize("bad", [
        "/etc/passwd",
        "Assets/../secrets.txt",
        "Scripts/Player.cs",
        "assets/Runtime/Player.cs",
        "Assets\\Runtime\\Player.cs",
        "",
    ])
    def test_rejected_paths(self, bad):
        with pytest.raises(PathEscape) as err:
            check_project_path(bad)
        assert err.value.path == bad

    @pytest.mark.parametrize("good", [
        "Assets/Runtime/PlayerController.cs",
        "Assets/Editor/SceneBuilder.cs",
        "Assets/Scenes/Main.unity",
    ])
    def test_accepted_paths(self, good):
        check_project_path(good)


class TestEditorScript:
    def test_template_mode_wraps_the_scene_builder(self, obstacle_bp, artifacts, editor):
        assert editor.path == "Assets/Editor/SceneBuilder.cs"
        assert editor.type_name == "SceneBuilder"
        assert editor.menu_entry_name == "UniGen/Build Scene"
        assert editor.batch_entry_point == "UniGenGenerated.SceneBuilder.BuildAndExit"
        assert editor.content_hash == sha256_text(editor.source)

    def test_gateway_mode_briefs_the_model(self, obstacle_bp, artifacts, scripted_model):
        gateway = Gateway(mode="live", transport=scripted_model, model="test-model")
        plans = plan_script_set(obstacle_bp)
        result = generate_editor_script(
            obstacle_bp, artifacts, gateway=gateway, plans=plans)
        brief = scripted_model.requests[-1].messages[-1].content
        assert brief.splitlines()[0].startswith(
            "Write the Unity editor script SceneBuilder.cs")
        assert "// ENTITY player" in result.source


class TestAssembly:
    def test_project_tree_layout(self, tmp_path, obstacle_bp, artifacts, editor):
        manifest = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        root = tmp_path / "project"
        runtime = {p.name for p in (root / "Assets/Runtime").iterdir()}
        assert runtime == {
            "PlayerController.cs", "CameraFollow.cs", "CoinPickup.cs",
            "SpikeHazard.cs", "GoalZone.cs", "UIManager.cs", "GameManager.cs",
            "ReflectionHelper.cs",
        }
        editor_files = {p.name for p in (root / "Assets/Editor").iterdir()}
        assert editor_files == {
            "SceneBuilder.cs", "SceneBuildEntry.cs", "CompileLogCapture.cs"}
        assert manifest.root_path == "project"

    def test_manifest_matches_disk(self, tmp_path, obstacle_bp, artifacts, editor):
        manifest = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        root = tmp_path / "project"
        assert len(manifest.files) == len(artifacts) + 1 + 3
        for entry in manifest.files:
            on_disk = (root / entry.relative_path).read_text(encoding="utf-8")
            assert sha256_text(on_disk) == entry.content_hash, entry.relative_path
        paths = [e.relative_path for e in manifest.files]
        assert paths == sorted(paths)
        assert "manifest.json" not in " ".join(paths)

    def test_origins_distinguish_generated_from_support(
            self, tmp_path, obstacle_bp, artifacts, editor):
        manifest = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        by_path = {e.relative_path: e.origin for e in manifest.files}
        assert by_path["Assets/Runtime/PlayerController.cs"] == "generated"
        assert by_path["Assets/Editor/SceneBuilder.cs"] == "generated"
        assert by_path["Assets/Runtime/ReflectionHelper.cs"] == "support"
        assert by_path["Assets/Editor/CompileLogCapture.cs"] == "support"

    def test_reassembly_is_idempotent(self, tmp_path, obstacle_bp, artifacts, editor):
        first = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        stats = {p: p.stat().st_mtime_ns
                 for p in (tmp_path / "project").rglob("*") if p.is_file()}
        second = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        assert second == first
        assert second.created_at == first.created_at
        for p, mtime in stats.items():
            if p.name != "manifest.json":
                assert p.stat().st_mtime_ns == mtime, p

    def test_duplicate_project_paths_are_rejected(
            self, tmp_path, obstacle_bp, artifacts, editor):
        clash = [artifacts[0], artifacts[0]]
        with pytest.raises(PathEscape, match="duplicate project path"):
            assemble_project(tmp_path, obstacle_bp, clash + artifacts[1:], editor)

    def test_changed_artifact_refreshes_the_tree(
            self, tmp_path, obstacle_bp, artifacts, editor, obstacle_doc):
        assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        obstacle_doc["behaviors"][0]["params"]["speed"] = 11
        from unigen.blueprint import parse_blueprint
        bp2 = parse_blueprint(json.dumps(obstacle_doc))
        artifacts2 = [template_generate(p, bp2) for p in plan_script_set(bp2)]
        editor2 = generate_editor_script(bp2, artifacts2)
        manifest2 = assemble_project(tmp_path, bp2, artifacts2, editor2)
        player = tmp_path / "project/Assets/Runtime/PlayerController.cs"
        assert "public float speed = 11f;" in player.read_text(encoding="utf-8")
        by_path = {e.relative_path: e for e in manifest2.files}
        assert by_path["Assets/Runtime/PlayerController.cs"].content_hash == \
            sha256_text(player.read_text(encoding="utf-8"))


class TestManifestIo:
    def test_round_trip(self, tmp_path, obstacle_bp, artifacts, editor):
        manifest = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        project_dir = tmp_path / "project"
        assert load_manifest(project_dir) == manifest
        doc = json.loads((project_dir / "manifest.json").read_text(encoding="utf-8"))
        assert set(doc) == {"rootPath", "createdAt", "files"}
        assert doc["rootPath"] == "project"
        assert all(set(e) == {"relativePath", "contentHash", "origin"}
                   for e in doc["files"])

    def test_write_manifest_ends_with_a_newline(
            self, tmp_path, obstacle_bp, artifacts, editor):
        manifest = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
        path = tmp_path / "copy.json"
        write_manifest(path, manifest)
        assert path.read_text(encoding="utf-8").endswith("}\n")


def test_llm_generated_scripts_assemble_identically(
        tmp_path, obstacle_bp, scripted_model):
    import fakes
    from unigen.blueprint import blueprint_hash
    from unigen.planning import LogicDescription

    gateway = Gateway(mode="live", transport=scripted_model, model="test-model")
    plans = plan_script_set(obstacle_bp)
    desc = LogicDescription(markdown=fakes.default_description(obstacle_bp),
                            source_blueprint_hash=blueprint_hash(obstacle_bp))
    artifacts = generate_scripts(obstacle_bp, desc, gateway)
    editor = generate_editor_script(
        obstacle_bp, artifacts, gateway=gateway, plans=plans)
    manifest = assemble_project(tmp_path, obstacle_bp, artifacts, editor)
    template_artifacts = [template_generate(p, obstacle_bp) for p in plans]
    assert [a.source for a in artifacts] == [a.source for a in template_artifacts]
    assert {e.relative_path for e in manifest.files} == {
        e.relative_path
        for e in assemble_project(
            tmp_path / "other", obstacle_bp, template_artifacts,
            generate_editor_script(obstacle_bp, template_artifacts)).files}
