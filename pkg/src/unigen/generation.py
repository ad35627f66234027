"""Stage 2: blueprint to runtime C# scripts.

Two interchangeable code paths produce the same artifact shape: the model
path (strict output requirements plus a bounded repair loop) and the
deterministic template path. Validation of emitted source is lexical only;
compile truth belongs to the engine and the debugging loop.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blueprint import (
    Diagnostic,
    GameBlueprint,
    IDENTIFIER_RE,
    ValidationReport,
)
from .common import sha256_text
from .csharp_templates import (
    TEMPLATE_KINDS,
    TemplateUnavailable,
    render_runtime_script,
)
from .gateway import ChatMessage, ChatRequest, Gateway, extract_code_block
from .planning import MAX_ROUNDS, LogicDescription
from .prompts import render_prompt

RUNTIME_DIR = "Assets/Runtime"

# Lexical deny-list: obsolete engine APIs plus filesystem/network/process
# access. Extendable by callers of validate_scripts.
FORBIDDEN_TOKENS = (
    "Application.LoadLevel",
    "FindSceneObjectsOfType",
    "UnityEngine.WWW",
    "System.IO.",
    "System.Net.",
    "UnityEngine.Networking",
    "Process.Start",
    "Application.OpenURL",
)


class DuplicateTypeName(Exception):
    """Two script plans claim the same type name."""


class ScriptRejected(Exception):
    """Model output for one script still fails validation after repairs."""

    def __init__(self, type_name: str, report: ValidationReport):
        super().__init__(f"script {type_name} rejected:\n{report.render()}")
        self.type_name = type_name
        self.report = report


@dataclass(frozen=True)
class FieldRequirement:
    field: str
    ref: object  # binding reference or literal, verbatim from the blueprint


@dataclass(frozen=True)
class ScriptPlan:
    type_name: str
    kind: str
    entity_id: str | None
    required_fields: tuple[FieldRequirement, ...] = ()
    required_functions: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScriptArtifact:
    path: str
    type_name: str
    role: str  # "runtime" | "editor"
    source: str
    content_hash: str

    @classmethod
    def create(cls, path: str, type_name: str, role: str, source: str) -> "ScriptArtifact":
        return cls(path=path, type_name=type_name, role=role,
                   source=source, content_hash=sha256_text(source))


def plan_script_set(bp: GameBlueprint) -> list[ScriptPlan]:
    """One plan per behavior, blueprint order, plus a synthetic game manager
    when the blueprint declares none (always last)."""
    plans = []
    seen: set[str] = set()
    for behavior in bp.behaviors:
        if behavior.type_name in seen:
            raise DuplicateTypeName(behavior.type_name)
        seen.add(behavior.type_name)
        plans.append(ScriptPlan(
            type_name=behavior.type_name,
            kind=behavior.kind,
            entity_id=behavior.entity_id,
            required_fields=tuple(
                FieldRequirement(b.field, b.ref) for b in behavior.bindings),
            required_functions=tuple(
                bp.naming.functions_for_kind(behavior.kind).values()),
        ))
    if not bp.behaviors_of_kind("gameManager"):
        type_name = bp.naming.component_map().get("gameManager", "GameManager")
        if type_name in seen:
            raise DuplicateTypeName(type_name)
        plans.append(ScriptPlan(
            type_name=type_name,
            kind="gameManager",
            entity_id=None,
            required_functions=tuple(
                bp.naming.functions_for_kind("gameManager").values()),
        ))
    return plans


def template_generate(plan: ScriptPlan, bp: GameBlueprint) -> ScriptArtifact:
    if plan.kind not in TEMPLATE_KINDS:
        raise TemplateUnavailable(f"no template for behavior kind {plan.kind!r}")
    params: dict[str, object] = {}
    for behavior in bp.behaviors:
        if behavior.type_name == plan.type_name:
            params = behavior.param_map()
            break
    if plan.kind == "gameManager" and "targetScore" not in params:
        threshold = _score_win_threshold(bp)
        if threshold is not None:
            params["targetScore"] = threshold
    source = render_runtime_script(
        kind=plan.kind,
        type_name=plan.type_name,
        bp=bp,
        params=params,
        binding_fields=tuple(f.field for f in plan.required_fields),
    )
    return ScriptArtifact.create(
        path=f"{RUNTIME_DIR}/{plan.type_name}.cs",
        type_name=plan.type_name,
        role="runtime",
        source=source,
    )


def _score_win_threshold(bp: GameBlueprint) -> int | None:
    for rule in bp.interactions:
        if rule.trigger == "scoreReaches" and rule.effect == "win" and rule.arg:
            try:
                return int(rule.arg)
            except ValueError:
                return None
    return None


def generate_scripts(
    bp: GameBlueprint,
    desc: LogicDescription,
    gateway: Gateway,
) -> list[ScriptArtifact]:
    """Model-driven path: one artifact per plan, each validated lexically
    with up to MAX_ROUNDS model calls (diagnostics fed back on repair)."""
    artifacts = []
    for plan in plan_script_set(bp):
        artifacts.append(_generate_one(plan, bp, desc, gateway))
    return artifacts


def _generate_one(
    plan: ScriptPlan,
    bp: GameBlueprint,
    desc: LogicDescription,
    gateway: Gateway,
) -> ScriptArtifact:
    messages = [
        ChatMessage("system", render_prompt("generation.system")),
        ChatMessage("user", _script_brief(plan, bp, desc)),
    ]
    report = ValidationReport()
    for _ in range(MAX_ROUNDS):
        response = gateway.complete(ChatRequest(
            model=gateway.model, messages=tuple(messages)))
        source = extract_code_block(response.content)
        if source and not source.endswith("\n"):
            source += "\n"
        artifact = ScriptArtifact.create(
            path=f"{RUNTIME_DIR}/{plan.type_name}.cs",
            type_name=plan.type_name,
            role="runtime",
            source=source,
        )
        report = validate_scripts([artifact], bp, plans=[plan])
        if report.is_valid:
            return artifact
        messages.append(ChatMessage("assistant", response.content))
        messages.append(ChatMessage("user", render_prompt(
            "generation.repair", diagnostics=report.render())))
    raise ScriptRejected(plan.type_name, report)


def _script_brief(plan: ScriptPlan, bp: GameBlueprint, desc: LogicDescription) -> str:
    from .blueprint import canonical_serialize

    lines = [
        f"Write the Unity C# script {plan.type_name}.cs.",
        f"Class name: {plan.type_name}",
        f"Behavior kind: {plan.kind}",
    ]
    if plan.entity_id:
        lines.append(f"Attached to entity: {plan.entity_id}")
    if plan.required_fields:
        lines.append("Required public fields (bound at assembly time):")
        for requirement in plan.required_fields:
            lines.append(f"- {requirement.field} (bound to {requirement.ref})")
    if plan.required_functions:
        lines.append("Required function names:")
        for name in plan.required_functions:
            lines.append(f"- {name}")
    section = _description_section(desc, plan.type_name)
    if section:
        lines.append("")
        lines.append("Logic description for this script:")
        lines.append(section)
    lines.append("")
    lines.append("Full game blueprint:")
    lines.append(canonical_serialize(bp).rstrip("\n"))
    return "\n".join(lines)


def _description_section(desc: LogicDescription, type_name: str) -> str | None:
    marker = f"## Behavior: {type_name}"
    text = desc.markdown
    start = text.find(marker)
    if start < 0:
        return None
    end = text.find("\n## ", start + len(marker))
    section = text[start:] if end < 0 else text[start:end]
    return section.strip()


def validate_scripts(
    artifacts: list[ScriptArtifact],
    bp: GameBlueprint,
    plans: list[ScriptPlan] | None = None,
    forbidden_tokens: tuple[str, ...] = FORBIDDEN_TOKENS,
) -> ValidationReport:
    """Lexical source checks; every problem is a diagnostic, never an error."""
    if plans is None:
        plans = plan_script_set(bp)
    by_type = {plan.type_name: plan for plan in plans}
    diagnostics: list[Diagnostic] = []
    for artifact in artifacts:
        diagnostics.extend(_check_artifact(artifact, by_type.get(artifact.type_name),
                                           forbidden_tokens))
    return ValidationReport(tuple(diagnostics))


def _check_artifact(
    artifact: ScriptArtifact,
    plan: ScriptPlan | None,
    forbidden_tokens: tuple[str, ...],
) -> list[Diagnostic]:
    diags = []
    path = artifact.path

    def error(code: str, message: str) -> None:
        diags.append(Diagnostic("error", code, path, message))

    stem = path.rsplit("/", 1)[-1]
    if stem.endswith(".cs"):
        stem = stem[:-3]
    else:
        error("BAD_EXTENSION", "artifact path must end in .cs")
    if stem != artifact.type_name:
        error("NAME_MISMATCH",
              f"file stem {stem!r} does not match type name {artifact.type_name!r}")
    if not IDENTIFIER_RE.match(artifact.type_name):
        error("INVALID_TYPENAME", f"type name {artifact.type_name!r} is not an identifier")

    source = artifact.source
    declared = f"class {artifact.type_name}"
    if declared not in source:
        error("MISSING_TYPE", f"source does not declare {declared!r}")
    opens, closes = source.count("{"), source.count("}")
    if opens != closes:
        error("UNBALANCED_BRACES", f"{opens} opening vs {closes} closing braces")

    if plan is not None:
        for name in plan.required_functions:
            if name not in source:
                error("MISSING_FUNCTION", f"required function {name!r} absent")
        for requirement in plan.required_fields:
            if requirement.field not in source:
                error("MISSING_FIELD", f"required field {requirement.field!r} absent")

    for token in forbidden_tokens:
        if token in source:
            error("FORBIDDEN_TOKEN", f"forbidden token {token!r} present")
    return diags
