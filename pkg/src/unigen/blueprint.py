"""Blueprint IR: parse, validate, and canonically serialize game blueprints.

The blueprint is the single authoritative description of one game (entities,
behaviors, interactions, UI, naming registry) that the planning stage emits
and every later stage consumes. Parsing is structural only; semantic rules
live in :func:`validate` so callers can repair a structurally sound but
inconsistent document.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .common import sha256_text

SHAPES = frozenset({"cube", "sphere", "capsule", "cylinder", "plane", "asset"})
BEHAVIOR_KINDS = frozenset({
    "playerMovement", "cameraFollow", "npcPath", "collectible",
    "hazard", "goal", "uiManager", "gameManager", "custom",
})
TRIGGERS = frozenset({"collision", "triggerEnter", "keyPress", "scoreReaches"})
OBJECT_TRIGGERS = frozenset({"collision", "triggerEnter"})
EFFECTS = frozenset({"gameOver", "win", "scoreDelta", "destroyObject", "uiMessage", "custom"})
UI_KINDS = frozenset({"scoreText", "messageText"})

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# Compact schema description embedded into planning prompts.
SCHEMA_SUMMARY = """\
Top-level JSON object with exactly these keys:
  meta: {"name": string, "description": string}
  entities: array of {"id": string, "name": string,
    "shape": "cube"|"sphere"|"capsule"|"cylinder"|"plane"|"asset",
    "assetPath": string (only when shape is "asset"),
    "position": [x, y, z], "rotation": [x, y, z], "scale": [x, y, z],
    "physics": {"rigidbody": bool, "useGravity": bool, "colliderIsTrigger": bool},
    "color": [r, g, b, a] each in 0..1, "tags": array of string}
  behaviors: array of {"id": string, "entityId": string (an entity id),
    "kind": "playerMovement"|"cameraFollow"|"npcPath"|"collectible"|"hazard"|"goal"|"uiManager"|"gameManager"|"custom",
    "typeName": string (valid C# class name, unique across behaviors),
    "params": object of string -> number|string|bool,
    "bindings": array of {"field": string, "ref": "entity:<id>" | "ui:<id>" | literal}}
  interactions: array of {"id": string, "subject": string (entity id),
    "trigger": "collision"|"triggerEnter"|"keyPress"|"scoreReaches",
    "arg": string (key name for keyPress, integer threshold for scoreReaches),
    "object": string (entity id, required for collision/triggerEnter),
    "effect": "gameOver"|"win"|"scoreDelta"|"destroyObject"|"uiMessage"|"custom",
    "effectArg": string (optional)}
  ui: array of {"id": string, "kind": "scoreText"|"messageText", "initialText": string}
  naming: {"functions": object of "<behaviorKind>.<slot>" -> function name,
           "components": object of behavior kind -> component type name}
At most one behavior of kind "uiManager" and one of kind "gameManager".
All ids must be unique across the whole document."""


class BlueprintSyntaxError(Exception):
    """Malformed blueprint document (not valid JSON)."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BlueprintSchemaError(Exception):
    """Structurally wrong document: missing required field or wrong type."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == "error")

    @property
    def warnings(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == "warning")

    @property
    def is_valid(self) -> bool:
        return not self.errors

    def render(self) -> str:
        if not self.diagnostics:
            return "no diagnostics"
        return "\n".join(
            f"{d.severity} {d.code} at {d.path}: {d.message}" for d in self.diagnostics
        )


@dataclass(frozen=True)
class Physics:
    rigidbody: bool = False
    use_gravity: bool = False
    collider_is_trigger: bool = False


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    shape: str
    position: tuple[float, float, float]
    rotation: tuple[float, float, float] = (0.0, 0.0, 0.0)
    scale: tuple[float, float, float] = (1.0, 1.0, 1.0)
    physics: Physics = Physics()
    color: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    tags: tuple[str, ...] = ()
    asset_path: str | None = None


@dataclass(frozen=True)
class Binding:
    field: str
    # "entity:<id>" / "ui:<id>" strings are references; anything else is a
    # literal value (number, flag, or plain text).
    ref: Any

    @property
    def is_entity_ref(self) -> bool:
        return isinstance(self.ref, str) and self.ref.startswith("entity:")

    @property
    def is_ui_ref(self) -> bool:
        return isinstance(self.ref, str) and self.ref.startswith("ui:")

    @property
    def target_id(self) -> str | None:
        if self.is_entity_ref or self.is_ui_ref:
            return self.ref.split(":", 1)[1]
        return None


@dataclass(frozen=True)
class BehaviorSpec:
    id: str
    entity_id: str
    kind: str
    type_name: str
    params: tuple[tuple[str, Any], ...] = ()
    bindings: tuple[Binding, ...] = ()

    def param_map(self) -> dict[str, Any]:
        return dict(self.params)


@dataclass(frozen=True)
class InteractionRule:
    id: str
    subject: str
    trigger: str
    effect: str
    arg: str | None = None
    object: str | None = None
    effect_arg: str | None = None


@dataclass(frozen=True)
class UiElement:
    id: str
    kind: str
    initial_text: str = ""


@dataclass(frozen=True)
class NamingRegistry:
    functions: tuple[tuple[str, str], ...] = ()
    components: tuple[tuple[str, str], ...] = ()

    def function_map(self) -> dict[str, str]:
        return dict(self.functions)

    def component_map(self) -> dict[str, str]:
        return dict(self.components)

    def functions_for_kind(self, kind: str) -> dict[str, str]:
        """Function names whose semantic key is namespaced under a behavior kind."""
        prefix = kind + "."
        return {k[len(prefix):]: v for k, v in self.functions if k.startswith(prefix)}


@dataclass(frozen=True)
class GameBlueprint:
    name: str
    description: str
    entities: tuple[Entity, ...] = ()
    behaviors: tuple[BehaviorSpec, ...] = ()
    interactions: tuple[InteractionRule, ...] = ()
    ui: tuple[UiElement, ...] = ()
    naming: NamingRegistry = NamingRegistry()
    # UNKNOWN_KEY warnings collected during parsing; carried for validate()
    # but excluded from equality and serialization.
    parse_warnings: tuple[Diagnostic, ...] = field(default=(), compare=False, repr=False)

    def entity(self, entity_id: str) -> Entity | None:
        for e in self.entities:
            if e.id == entity_id:
                return e
        return None

    def ui_element(self, ui_id: str) -> UiElement | None:
        for u in self.ui:
            if u.id == ui_id:
                return u
        return None

    def behaviors_of_kind(self, kind: str) -> tuple[BehaviorSpec, ...]:
        return tuple(b for b in self.behaviors if b.kind == kind)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_ENTITY_KEYS = {"id", "name", "shape", "assetPath", "position", "rotation",
                "scale", "physics", "color", "tags"}
_PHYSICS_KEYS = {"rigidbody", "useGravity", "colliderIsTrigger"}
_BEHAVIOR_KEYS = {"id", "entityId", "kind", "typeName", "params", "bindings"}
_BINDING_KEYS = {"field", "ref"}
_INTERACTION_KEYS = {"id", "subject", "trigger", "arg", "object", "effect", "effectArg"}
_UI_KEYS = {"id", "kind", "initialText"}
_TOP_KEYS = {"meta", "entities", "behaviors", "interactions", "ui", "naming"}
_META_KEYS = {"name", "description"}
_NAMING_KEYS = {"functions", "components"}


class _Parser:
    def __init__(self) -> None:
        self.warnings: list[Diagnostic] = []

    def note_unknown_keys(self, obj: dict, known: set[str], path: str) -> None:
        for key in obj:
            if key not in known:
                self.warnings.append(Diagnostic(
                    "warning", "UNKNOWN_KEY", f"{path}/{key}",
                    f"unknown key {key!r} ignored"))

    def require(self, obj: dict, key: str, path: str) -> Any:
        if key not in obj:
            raise BlueprintSchemaError(f"{path}/{key}", "required field is missing")
        return obj[key]

    def text(self, value: Any, path: str) -> str:
        if not isinstance(value, str):
            raise BlueprintSchemaError(path, f"expected text, got {_type_name(value)}")
        return value

    def obj(self, value: Any, path: str) -> dict:
        if not isinstance(value, dict):
            raise BlueprintSchemaError(path, f"expected object, got {_type_name(value)}")
        return value

    def array(self, value: Any, path: str) -> list:
        if not isinstance(value, list):
            raise BlueprintSchemaError(path, f"expected array, got {_type_name(value)}")
        return value

    def flag(self, value: Any, path: str) -> bool:
        if not isinstance(value, bool):
            raise BlueprintSchemaError(path, f"expected flag, got {_type_name(value)}")
        return value

    def real(self, value: Any, path: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise BlueprintSchemaError(path, f"expected number, got {_type_name(value)}")
        return float(value)

    def triple(self, value: Any, path: str) -> tuple[float, float, float]:
        arr = self.array(value, path)
        if len(arr) != 3:
            raise BlueprintSchemaError(path, f"expected 3 numbers, got {len(arr)}")
        return tuple(self.real(v, f"{path}/{i}") for i, v in enumerate(arr))  # type: ignore[return-value]

    def quad(self, value: Any, path: str) -> tuple[float, float, float, float]:
        arr = self.array(value, path)
        if len(arr) != 4:
            raise BlueprintSchemaError(path, f"expected 4 numbers, got {len(arr)}")
        return tuple(self.real(v, f"{path}/{i}") for i, v in enumerate(arr))  # type: ignore[return-value]

    def scalar(self, value: Any, path: str) -> Any:
        if value is not None and not isinstance(value, (str, int, float, bool)):
            raise BlueprintSchemaError(path, f"expected number, text, or flag, got {_type_name(value)}")
        return value


def _type_name(value: Any) -> str:
    if value is None:
        return "null"
    return {dict: "object", list: "array", str: "text", bool: "flag",
            int: "number", float: "number"}.get(type(value), type(value).__name__)


def parse_blueprint(text: str) -> GameBlueprint:
    """Parse a blueprint document into the IR, filling documented defaults.

    Raises BlueprintSyntaxError for malformed JSON and BlueprintSchemaError
    (naming the offending path) for missing required fields or wrong types.
    Semantic problems are left to :func:`validate`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BlueprintSyntaxError(exc.msg, exc.lineno, exc.colno) from exc

    p = _Parser()
    root = p.obj(doc, "")
    p.note_unknown_keys(root, _TOP_KEYS, "")

    meta = p.obj(p.require(root, "meta", ""), "/meta")
    p.note_unknown_keys(meta, _META_KEYS, "/meta")
    name = p.text(p.require(meta, "name", "/meta"), "/meta/name")
    description = p.text(meta.get("description", ""), "/meta/description")

    entities = tuple(
        _parse_entity(p, p.obj(raw, f"/entities/{i}"), f"/entities/{i}")
        for i, raw in enumerate(p.array(p.require(root, "entities", ""), "/entities"))
    )
    behaviors = tuple(
        _parse_behavior(p, p.obj(raw, f"/behaviors/{i}"), f"/behaviors/{i}")
        for i, raw in enumerate(p.array(p.require(root, "behaviors", ""), "/behaviors"))
    )
    interactions = tuple(
        _parse_interaction(p, p.obj(raw, f"/interactions/{i}"), f"/interactions/{i}")
        for i, raw in enumerate(p.array(p.require(root, "interactions", ""), "/interactions"))
    )
    ui = tuple(
        _parse_ui(p, p.obj(raw, f"/ui/{i}"), f"/ui/{i}")
        for i, raw in enumerate(p.array(p.require(root, "ui", ""), "/ui"))
    )
    naming = _parse_naming(p, p.obj(p.require(root, "naming", ""), "/naming"))

    return GameBlueprint(
        name=name, description=description, entities=entities,
        behaviors=behaviors, interactions=interactions, ui=ui, naming=naming,
        parse_warnings=tuple(p.warnings),
    )


def _parse_entity(p: _Parser, raw: dict, path: str) -> Entity:
    p.note_unknown_keys(raw, _ENTITY_KEYS, path)
    entity_id = p.text(p.require(raw, "id", path), f"{path}/id")
    physics_raw = raw.get("physics")
    if physics_raw is None:
        physics = Physics()
    else:
        pobj = p.obj(physics_raw, f"{path}/physics")
        p.note_unknown_keys(pobj, _PHYSICS_KEYS, f"{path}/physics")
        physics = Physics(
            rigidbody=p.flag(pobj.get("rigidbody", False), f"{path}/physics/rigidbody"),
            use_gravity=p.flag(pobj.get("useGravity", False), f"{path}/physics/useGravity"),
            collider_is_trigger=p.flag(pobj.get("colliderIsTrigger", False),
                                       f"{path}/physics/colliderIsTrigger"),
        )
    asset_path = raw.get("assetPath")
    if asset_path is not None:
        asset_path = p.text(asset_path, f"{path}/assetPath")
    return Entity(
        id=entity_id,
        name=p.text(raw.get("name", entity_id), f"{path}/name"),
        shape=_parse_enum(p.require(raw, "shape", path), SHAPES, p, f"{path}/shape"),
        position=p.triple(p.require(raw, "position", path), f"{path}/position"),
        rotation=p.triple(raw.get("rotation", [0, 0, 0]), f"{path}/rotation"),
        scale=p.triple(raw.get("scale", [1, 1, 1]), f"{path}/scale"),
        physics=physics,
        color=p.quad(raw.get("color", [1, 1, 1, 1]), f"{path}/color"),
        tags=tuple(p.text(t, f"{path}/tags/{i}")
                   for i, t in enumerate(p.array(raw.get("tags", []), f"{path}/tags"))),
        asset_path=asset_path,
    )


def _parse_enum(value: Any, allowed: frozenset[str], p: _Parser, path: str) -> str:
    text = p.text(value, path)
    if text not in allowed:
        raise BlueprintSchemaError(path, f"{text!r} is not one of {sorted(allowed)}")
    return text


def _parse_behavior(p: _Parser, raw: dict, path: str) -> BehaviorSpec:
    p.note_unknown_keys(raw, _BEHAVIOR_KEYS, path)
    params_obj = p.obj(raw.get("params", {}), f"{path}/params")
    bindings = []
    for i, braw in enumerate(p.array(raw.get("bindings", []), f"{path}/bindings")):
        bobj = p.obj(braw, f"{path}/bindings/{i}")
        p.note_unknown_keys(bobj, _BINDING_KEYS, f"{path}/bindings/{i}")
        bindings.append(Binding(
            field=p.text(p.require(bobj, "field", f"{path}/bindings/{i}"),
                         f"{path}/bindings/{i}/field"),
            ref=p.scalar(p.require(bobj, "ref", f"{path}/bindings/{i}"),
                         f"{path}/bindings/{i}/ref"),
        ))
    return BehaviorSpec(
        id=p.text(p.require(raw, "id", path), f"{path}/id"),
        entity_id=p.text(p.require(raw, "entityId", path), f"{path}/entityId"),
        kind=_parse_enum(p.require(raw, "kind", path), BEHAVIOR_KINDS, p, f"{path}/kind"),
        type_name=p.text(p.require(raw, "typeName", path), f"{path}/typeName"),
        params=tuple((k, p.scalar(v, f"{path}/params/{k}")) for k, v in params_obj.items()),
        bindings=tuple(bindings),
    )


def _parse_interaction(p: _Parser, raw: dict, path: str) -> InteractionRule:
    p.note_unknown_keys(raw, _INTERACTION_KEYS, path)
    arg = raw.get("arg")
    if arg is not None:
        # Models frequently emit numeric thresholds; coerce to the text the
        # schema calls for rather than rejecting.
        arg = str(arg) if isinstance(arg, (int, float)) and not isinstance(arg, bool) \
            else p.text(arg, f"{path}/arg")
    obj = raw.get("object")
    if obj is not None:
        obj = p.text(obj, f"{path}/object")
    effect_arg = raw.get("effectArg")
    if effect_arg is not None:
        effect_arg = p.text(effect_arg, f"{path}/effectArg")
    return InteractionRule(
        id=p.text(p.require(raw, "id", path), f"{path}/id"),
        subject=p.text(p.require(raw, "subject", path), f"{path}/subject"),
        trigger=_parse_enum(p.require(raw, "trigger", path), TRIGGERS, p, f"{path}/trigger"),
        effect=_parse_enum(p.require(raw, "effect", path), EFFECTS, p, f"{path}/effect"),
        arg=arg,
        object=obj,
        effect_arg=effect_arg,
    )


def _parse_ui(p: _Parser, raw: dict, path: str) -> UiElement:
    p.note_unknown_keys(raw, _UI_KEYS, path)
    return UiElement(
        id=p.text(p.require(raw, "id", path), f"{path}/id"),
        kind=_parse_enum(p.require(raw, "kind", path), UI_KINDS, p, f"{path}/kind"),
        initial_text=p.text(raw.get("initialText", ""), f"{path}/initialText"),
    )


def _parse_naming(p: _Parser, raw: dict) -> NamingRegistry:
    p.note_unknown_keys(raw, _NAMING_KEYS, "/naming")
    functions = p.obj(raw.get("functions", {}), "/naming/functions")
    components = p.obj(raw.get("components", {}), "/naming/components")
    return NamingRegistry(
        functions=tuple((k, p.text(v, f"/naming/functions/{k}")) for k, v in functions.items()),
        components=tuple((k, p.text(v, f"/naming/components/{k}")) for k, v in components.items()),
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(bp: GameBlueprint) -> ValidationReport:
    """Check every semantic invariant, one diagnostic per violation."""
    diags: list[Diagnostic] = list(bp.parse_warnings)
    entity_ids = {e.id for e in bp.entities}
    ui_ids = {u.id for u in bp.ui}

    seen_ids: dict[str, str] = {}
    for path, element_id in _all_ids(bp):
        if not element_id:
            diags.append(Diagnostic("error", "EMPTY_ID", path, "identifier is empty"))
        elif element_id in seen_ids:
            diags.append(Diagnostic(
                "error", "DUPLICATE_ID", path,
                f"id {element_id!r} already used at {seen_ids[element_id]}"))
        else:
            seen_ids[element_id] = path

    for i, entity in enumerate(bp.entities):
        path = f"/entities/{i}"
        if any(c <= 0 for c in entity.scale):
            diags.append(Diagnostic(
                "error", "NONPOSITIVE_SCALE", f"{path}/scale",
                f"scale components must be strictly positive, got {list(entity.scale)}"))
        if any(not 0.0 <= c <= 1.0 for c in entity.color):
            diags.append(Diagnostic(
                "error", "COLOR_RANGE", f"{path}/color",
                f"color components must be within [0,1], got {list(entity.color)}"))
        if entity.shape == "asset" and not entity.asset_path:
            diags.append(Diagnostic(
                "error", "MISSING_ASSET_PATH", f"{path}/assetPath",
                "assetPath is required when shape is 'asset'"))
        if entity.shape != "asset" and entity.asset_path is not None:
            diags.append(Diagnostic(
                "error", "UNEXPECTED_ASSET_PATH", f"{path}/assetPath",
                f"assetPath is only allowed when shape is 'asset', not {entity.shape!r}"))

    type_names: dict[str, str] = {}
    manager_counts = {"uiManager": 0, "gameManager": 0}
    for i, behavior in enumerate(bp.behaviors):
        path = f"/behaviors/{i}"
        if behavior.entity_id not in entity_ids:
            diags.append(Diagnostic(
                "error", "DANGLING_REF", f"{path}/entityId",
                f"entity {behavior.entity_id!r} does not exist"))
        if not IDENTIFIER_RE.match(behavior.type_name):
            diags.append(Diagnostic(
                "error", "INVALID_TYPENAME", f"{path}/typeName",
                f"{behavior.type_name!r} is not a valid script type identifier"))
        elif behavior.type_name in type_names:
            diags.append(Diagnostic(
                "error", "DUPLICATE_TYPENAME", f"{path}/typeName",
                f"typeName {behavior.type_name!r} already used at {type_names[behavior.type_name]}"))
        else:
            type_names[behavior.type_name] = path
        if behavior.kind in manager_counts:
            manager_counts[behavior.kind] += 1
        for j, binding in enumerate(behavior.bindings):
            bpath = f"{path}/bindings/{j}/ref"
            if binding.is_entity_ref and binding.target_id not in entity_ids:
                diags.append(Diagnostic(
                    "error", "DANGLING_REF", bpath,
                    f"entity {binding.target_id!r} does not exist"))
            if binding.is_ui_ref and binding.target_id not in ui_ids:
                diags.append(Diagnostic(
                    "error", "DANGLING_REF", bpath,
                    f"ui element {binding.target_id!r} does not exist"))

    for kind, count in manager_counts.items():
        if count > 1:
            diags.append(Diagnostic(
                "error", "DUPLICATE_MANAGER", "/behaviors",
                f"at most one behavior of kind {kind!r} is allowed, found {count}"))

    for i, rule in enumerate(bp.interactions):
        path = f"/interactions/{i}"
        if rule.subject not in entity_ids:
            diags.append(Diagnostic(
                "error", "DANGLING_REF", f"{path}/subject",
                f"entity {rule.subject!r} does not exist"))
        if rule.trigger in OBJECT_TRIGGERS:
            if rule.object is None:
                diags.append(Diagnostic(
                    "error", "MISSING_OBJECT", f"{path}/object",
                    f"object is required for trigger {rule.trigger!r}"))
            elif rule.object not in entity_ids:
                diags.append(Diagnostic(
                    "error", "DANGLING_REF", f"{path}/object",
                    f"entity {rule.object!r} does not exist"))
        elif rule.object is not None:
            diags.append(Diagnostic(
                "error", "UNEXPECTED_OBJECT", f"{path}/object",
                f"object is only allowed for collision/triggerEnter, not {rule.trigger!r}"))
        if rule.trigger == "scoreReaches":
            try:
                int(rule.arg or "")
            except ValueError:
                diags.append(Diagnostic(
                    "error", "BAD_SCORE_THRESHOLD", f"{path}/arg",
                    f"arg must parse as an integer for scoreReaches, got {rule.arg!r}"))
        if rule.trigger == "keyPress" and not rule.arg:
            diags.append(Diagnostic(
                "error", "KEYPRESS_NO_ARG", f"{path}/arg",
                "arg (key name) is required for keyPress"))

    function_names: dict[str, str] = {}
    for key, fn_name in bp.naming.functions:
        if not IDENTIFIER_RE.match(fn_name):
            diags.append(Diagnostic(
                "error", "INVALID_NAME", f"/naming/functions/{key}",
                f"{fn_name!r} is not a valid identifier"))
        if fn_name in function_names and function_names[fn_name] != key:
            diags.append(Diagnostic(
                "error", "NAMING_COLLISION", f"/naming/functions/{key}",
                f"function name {fn_name!r} already assigned to {function_names[fn_name]!r}"))
        else:
            function_names.setdefault(fn_name, key)
    for key, comp_name in bp.naming.components:
        if not IDENTIFIER_RE.match(comp_name):
            diags.append(Diagnostic(
                "error", "INVALID_NAME", f"/naming/components/{key}",
                f"{comp_name!r} is not a valid identifier"))

    if not bp.behaviors_of_kind("playerMovement"):
        diags.append(Diagnostic(
            "warning", "NO_PLAYER", "/behaviors",
            "no behavior of kind 'playerMovement' exists"))

    return ValidationReport(tuple(diags))


def _all_ids(bp: GameBlueprint):
    for i, e in enumerate(bp.entities):
        yield f"/entities/{i}/id", e.id
    for i, b in enumerate(bp.behaviors):
        yield f"/behaviors/{i}/id", b.id
    for i, r in enumerate(bp.interactions):
        yield f"/interactions/{i}/id", r.id
    for i, u in enumerate(bp.ui):
        yield f"/ui/{i}/id", u.id


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------

def canonical_serialize(bp: GameBlueprint) -> str:
    """Deterministic document text: fixed key order, explicit defaults,
    shortest round-trip number formatting, trailing newline."""
    return json.dumps(to_document(bp), indent=2, ensure_ascii=False) + "\n"


def to_document(bp: GameBlueprint) -> dict:
    return {
        "meta": {"name": bp.name, "description": bp.description},
        "entities": [_entity_doc(e) for e in bp.entities],
        "behaviors": [_behavior_doc(b) for b in bp.behaviors],
        "interactions": [_interaction_doc(r) for r in bp.interactions],
        "ui": [{"id": u.id, "kind": u.kind, "initialText": u.initial_text} for u in bp.ui],
        "naming": {
            "functions": dict(bp.naming.functions),
            "components": dict(bp.naming.components),
        },
    }


def _entity_doc(e: Entity) -> dict:
    doc: dict[str, Any] = {"id": e.id, "name": e.name, "shape": e.shape}
    if e.asset_path is not None:
        doc["assetPath"] = e.asset_path
    doc.update({
        "position": list(e.position),
        "rotation": list(e.rotation),
        "scale": list(e.scale),
        "physics": {
            "rigidbody": e.physics.rigidbody,
            "useGravity": e.physics.use_gravity,
            "colliderIsTrigger": e.physics.collider_is_trigger,
        },
        "color": list(e.color),
        "tags": list(e.tags),
    })
    return doc


def _behavior_doc(b: BehaviorSpec) -> dict:
    return {
        "id": b.id,
        "entityId": b.entity_id,
        "kind": b.kind,
        "typeName": b.type_name,
        "params": dict(b.params),
        "bindings": [{"field": bd.field, "ref": bd.ref} for bd in b.bindings],
    }


def _interaction_doc(r: InteractionRule) -> dict:
    doc: dict[str, Any] = {"id": r.id, "subject": r.subject, "trigger": r.trigger}
    if r.arg is not None:
        doc["arg"] = r.arg
    if r.object is not None:
        doc["object"] = r.object
    doc["effect"] = r.effect
    if r.effect_arg is not None:
        doc["effectArg"] = r.effect_arg
    return doc


def blueprint_hash(bp: GameBlueprint) -> str:
    """Hex digest binding downstream artifacts to one exact blueprint."""
    return sha256_text(canonical_serialize(bp))
