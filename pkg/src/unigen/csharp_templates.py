"""Deterministic C# source templates for the standardized behavior kinds.

Every renderer is a pure function of the blueprint material passed in, so
outputs are byte-stable and golden-testable. Cross-script calls use static
Instance properties on the manager types; field bindings are left to the
editor-time binder, which sets them through the reflection helper.

Collision-style interactions are realized by the collectible/hazard/goal
scripts attached to their entities; keyPress and scoreReaches interactions
are realized inside the game manager.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .blueprint import GameBlueprint, InteractionRule, NamingRegistry

TEMPLATE_KINDS = (
    "playerMovement", "cameraFollow", "npcPath", "collectible",
    "hazard", "goal", "uiManager", "gameManager",
)

# Function slots every template knows, with default C# method names.
DEFAULT_FUNCTIONS: dict[str, dict[str, str]] = {
    "playerMovement": {"move": "HandleMovement", "jump": "HandleJump"},
    "cameraFollow": {"follow": "FollowTarget"},
    "npcPath": {"advance": "AdvanceWaypoint"},
    "collectible": {"collect": "OnCollect"},
    "hazard": {"damage": "OnHazardHit"},
    "goal": {"reach": "OnGoalReached"},
    "uiManager": {"setScore": "SetScore", "setMessage": "ShowMessage"},
    "gameManager": {"addScore": "AddScore", "win": "TriggerWin", "lose": "TriggerLose"},
}

# Fields the template bodies declare themselves; the generic field block
# must not re-declare them.
RESERVED_FIELDS: dict[str, frozenset[str]] = {
    "cameraFollow": frozenset({"target"}),
    "uiManager": frozenset({"scoreText", "messageText"}),
}

# Built-in tunable fields per kind: (field name, C# type, default value).
BUILTIN_FIELDS: dict[str, tuple[tuple[str, str, object], ...]] = {
    "playerMovement": (("speed", "float", 5.0), ("jumpForce", "float", 5.0)),
    "cameraFollow": (
        ("offsetX", "float", 0.0), ("offsetY", "float", 5.0),
        ("offsetZ", "float", -8.0), ("smoothing", "float", 5.0),
    ),
    "npcPath": (
        ("speed", "float", 2.0), ("arriveDistance", "float", 0.2),
        ("waypoints", "string", "0,0,0; 4,0,0"),
    ),
    "collectible": (("value", "int", 1),),
    "hazard": (),
    "goal": (),
    "uiManager": (("scorePrefix", "string", "Score: "),),
    "gameManager": (
        ("targetScore", "int", 0),
        ("winMessage", "string", "You win!"),
        ("loseMessage", "string", "Game over"),
    ),
}

MENU_ENTRY_NAME = "UniGen/Build Scene"
GENERATED_NAMESPACE = "UniGenGenerated"
SUPPORT_NAMESPACE = "UniGenSupport"
SCENE_PATH = "Assets/Scenes/Main.unity"
ENTITY_MARKER = "// ENTITY "


class TemplateUnavailable(Exception):
    """No deterministic template exists for the requested behavior kind."""


@dataclass(frozen=True)
class ManagerContext:
    """Names other scripts use to reach the manager singletons."""
    game_manager_type: str
    gm_functions: tuple[tuple[str, str], ...]
    ui_manager_type: str | None
    ui_functions: tuple[tuple[str, str], ...]

    def gm(self, slot: str) -> str:
        return dict(self.gm_functions)[slot]

    def ui(self, slot: str) -> str:
        return dict(self.ui_functions)[slot]


def resolve_functions(kind: str, naming: NamingRegistry) -> dict[str, str]:
    names = dict(DEFAULT_FUNCTIONS.get(kind, {}))
    names.update(naming.functions_for_kind(kind))
    return names


def manager_context(bp: GameBlueprint) -> ManagerContext:
    gm = bp.behaviors_of_kind("gameManager")
    ui = bp.behaviors_of_kind("uiManager")
    gm_type = gm[0].type_name if gm else bp.naming.component_map().get("gameManager", "GameManager")
    ui_type = ui[0].type_name if ui else None
    return ManagerContext(
        game_manager_type=gm_type,
        gm_functions=tuple(sorted(resolve_functions("gameManager", bp.naming).items())),
        ui_manager_type=ui_type,
        ui_functions=tuple(sorted(resolve_functions("uiManager", bp.naming).items())),
    )


# ---------------------------------------------------------------------------
# Literals and small formatting helpers
# ---------------------------------------------------------------------------

def csharp_float(value: float) -> str:
    text = repr(float(value))
    if text.endswith(".0"):
        text = text[:-2]
    return text + "f"


def csharp_string(value: str) -> str:
    return json.dumps(value, ensure_ascii=False)


def csharp_literal(value: object, ctype: str) -> str:
    if ctype == "float":
        return csharp_float(float(value))
    if ctype == "int":
        return str(int(value))
    if ctype == "bool":
        return "true" if value else "false"
    if ctype == "string":
        return csharp_string(str(value))
    raise ValueError(f"no literal form for type {ctype}")


def infer_ctype(value: object) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, int):
        return "int"
    if isinstance(value, float):
        return "float"
    return "string"


def binding_field_type(field_name: str) -> str:
    lowered = field_name.lower()
    if lowered == "target" or lowered.endswith("target"):
        return "Transform"
    if lowered == "text" or lowered.endswith("text"):
        return "Text"
    return "GameObject"


def vector3(triple: tuple[float, float, float]) -> str:
    x, y, z = (csharp_float(v) for v in triple)
    return f"new Vector3({x}, {y}, {z})"


def color4(quad: tuple[float, float, float, float]) -> str:
    r, g, b, a = (csharp_float(v) for v in quad)
    return f"new Color({r}, {g}, {b}, {a})"


def key_code(arg: str) -> str:
    """Map a key name from a blueprint onto a KeyCode member name."""
    if len(arg) == 1 and arg.isalpha():
        return arg.upper()
    return arg[:1].upper() + arg[1:]


# ---------------------------------------------------------------------------
# Field blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDecl:
    name: str
    ctype: str
    default: str | None  # rendered literal, None for engine-assigned refs


def build_field_decls(
    kind: str,
    params: dict[str, object],
    binding_fields: tuple[str, ...],
) -> list[FieldDecl]:
    """Built-in fields (param-overridable), then extra params, then extra
    binding refs; first declaration of a name wins."""
    decls: list[FieldDecl] = []
    seen: set[str] = set(RESERVED_FIELDS.get(kind, frozenset()))
    for name, ctype, default in BUILTIN_FIELDS.get(kind, ()):
        value = params.get(name, default)
        decls.append(FieldDecl(name, ctype, csharp_literal(value, ctype)))
        seen.add(name)
    for name, value in params.items():
        if name not in seen:
            ctype = infer_ctype(value)
            decls.append(FieldDecl(name, ctype, csharp_literal(value, ctype)))
            seen.add(name)
    for name in binding_fields:
        if name not in seen:
            decls.append(FieldDecl(name, binding_field_type(name), None))
            seen.add(name)
    return decls


def render_field_block(decls: list[FieldDecl]) -> str:
    lines = []
    for d in decls:
        if d.default is None:
            lines.append(f"    public {d.ctype} {d.name};")
        else:
            lines.append(f"    public {d.ctype} {d.name} = {d.default};")
    return "\n".join(lines)


def _stub_methods(kind: str, functions: dict[str, str]) -> str:
    """Registry slots the template has no body for become reserved hooks so
    the emitted names still cover the required-function set."""
    known = set(DEFAULT_FUNCTIONS.get(kind, {}))
    stubs = []
    for slot, name in functions.items():
        if slot not in known:
            stubs.append(
                "\n    public void " + name + "()\n"
                "    {\n"
                "        // reserved hook from the naming registry\n"
                "    }\n"
            )
    return "".join(stubs)


# ---------------------------------------------------------------------------
# Runtime script templates
# ---------------------------------------------------------------------------

def render_runtime_script(
    kind: str,
    type_name: str,
    bp: GameBlueprint,
    params: dict[str, object],
    binding_fields: tuple[str, ...],
) -> str:
    if kind not in TEMPLATE_KINDS:
        raise TemplateUnavailable(f"no template for behavior kind {kind!r}")
    functions = resolve_functions(kind, bp.naming)
    ctx = manager_context(bp)
    fields = render_field_block(build_field_decls(kind, params, binding_fields))
    source = _RENDERERS[kind](type_name, fields, functions, ctx, bp)
    return _close_class(source, _stub_methods(kind, functions))


def _close_class(body: str, stubs: str) -> str:
    """Insert reserved-hook stubs before the final class brace."""
    if not stubs:
        return body
    head, _, _ = body.rpartition("}\n")
    return head + stubs + "}\n"


def _render_player_movement(type_name, fields, fn, ctx, bp) -> str:
    move, jump = fn["move"], fn["jump"]
    return f"""using UnityEngine;

public class {type_name} : MonoBehaviour
{{
{fields}

    private Rigidbody body;
    private bool grounded;

    private void Awake()
    {{
        body = GetComponent<Rigidbody>();
    }}

    private void Update()
    {{
        {move}();
        if (Input.GetKeyDown(KeyCode.Space))
        {{
            {jump}();
        }}
    }}

    public void {move}()
    {{
        float horizontal = Input.GetAxis("Horizontal");
        float vertical = Input.GetAxis("Vertical");
        Vector3 motion = new Vector3(horizontal, 0f, vertical);
        if (motion.sqrMagnitude > 1f)
        {{
            motion.Normalize();
        }}
        if (body != null)
        {{
            body.MovePosition(body.position + motion * speed * Time.deltaTime);
        }}
        else
        {{
            transform.position += motion * speed * Time.deltaTime;
        }}
    }}

    public void {jump}()
    {{
        if (body == null || !grounded)
        {{
            return;
        }}
        body.AddForce(Vector3.up * jumpForce, ForceMode.Impulse);
        grounded = false;
    }}

    private void OnCollisionEnter(Collision collision)
    {{
        grounded = true;
    }}
}}
"""


def _render_camera_follow(type_name, fields, fn, ctx, bp) -> str:
    follow = fn["follow"]
    return f"""using UnityEngine;

public class {type_name} : MonoBehaviour
{{
    public Transform target;
{fields}

    private void LateUpdate()
    {{
        {follow}();
    }}

    public void {follow}()
    {{
        if (target == null)
        {{
            return;
        }}
        Vector3 desired = target.position + new Vector3(offsetX, offsetY, offsetZ);
        transform.position = Vector3.Lerp(transform.position, desired, smoothing * Time.deltaTime);
        transform.LookAt(target);
    }}
}}
"""


def _render_npc_path(type_name, fields, fn, ctx, bp) -> str:
    advance = fn["advance"]
    return f"""using System.Globalization;
using UnityEngine;

public class {type_name} : MonoBehaviour
{{
{fields}

    private Vector3[] points;
    private int index;

    private void Awake()
    {{
        points = ParseWaypoints(waypoints);
    }}

    private void Update()
    {{
        if (points == null || points.Length == 0)
        {{
            return;
        }}
        Vector3 targetPoint = points[index];
        transform.position = Vector3.MoveTowards(transform.position, targetPoint, speed * Time.deltaTime);
        if (Vector3.Distance(transform.position, targetPoint) <= arriveDistance)
        {{
            {advance}();
        }}
    }}

    public void {advance}()
    {{
        if (points != null && points.Length > 0)
        {{
            index = (index + 1) % points.Length;
        }}
    }}

    private static Vector3[] ParseWaypoints(string encoded)
    {{
        if (string.IsNullOrEmpty(encoded))
        {{
            return new Vector3[0];
        }}
        string[] parts = encoded.Split(';');
        var result = new Vector3[parts.Length];
        for (int i = 0; i < parts.Length; i++)
        {{
            string[] axes = parts[i].Split(',');
            float x = axes.Length > 0 ? float.Parse(axes[0], CultureInfo.InvariantCulture) : 0f;
            float y = axes.Length > 1 ? float.Parse(axes[1], CultureInfo.InvariantCulture) : 0f;
            float z = axes.Length > 2 ? float.Parse(axes[2], CultureInfo.InvariantCulture) : 0f;
            result[i] = new Vector3(x, y, z);
        }}
        return result;
    }}
}}
"""


def _render_collectible(type_name, fields, fn, ctx, bp) -> str:
    collect = fn["collect"]
    gm = ctx.game_manager_type
    add_score = ctx.gm("addScore")
    return f"""using UnityEngine;

public class {type_name} : MonoBehaviour
{{
{fields}

    private void OnTriggerEnter(Collider other)
    {{
        if (!other.CompareTag("Player"))
        {{
            return;
        }}
        {collect}();
    }}

    public void {collect}()
    {{
        if ({gm}.Instance != null)
        {{
            {gm}.Instance.{add_score}(value);
        }}
        gameObject.SetActive(false);
    }}
}}
"""


def _render_hazard(type_name, fields, fn, ctx, bp) -> str:
    damage = fn["damage"]
    gm = ctx.game_manager_type
    lose = ctx.gm("lose")
    field_block = ("\n" + fields + "\n") if fields else ""
    return f"""using UnityEngine;

public class {type_name} : MonoBehaviour
{{{field_block}
    private void OnCollisionEnter(Collision collision)
    {{
        if (collision.gameObject.CompareTag("Player"))
        {{
            {damage}();
        }}
    }}

    private void OnTriggerEnter(Collider other)
    {{
        if (other.CompareTag("Player"))
        {{
            {damage}();
        }}
    }}

    public void {damage}()
    {{
        if ({gm}.Instance != null)
        {{
            {gm}.Instance.{lose}();
        }}
    }}
}}
"""


def _render_goal(type_name, fields, fn, ctx, bp) -> str:
    reach = fn["reach"]
    gm = ctx.game_manager_type
    win = ctx.gm("win")
    field_block = ("\n" + fields + "\n") if fields else ""
    return f"""using UnityEngine;

public class {type_name} : MonoBehaviour
{{{field_block}
    private void OnTriggerEnter(Collider other)
    {{
        if (!other.CompareTag("Player"))
        {{
            return;
        }}
        {reach}();
    }}

    public void {reach}()
    {{
        if ({gm}.Instance != null)
        {{
            {gm}.Instance.{win}();
        }}
    }}
}}
"""


def _render_ui_manager(type_name, fields, fn, ctx, bp) -> str:
    set_score, set_message = fn["setScore"], fn["setMessage"]
    return f"""using UnityEngine;
using UnityEngine.UI;

public class {type_name} : MonoBehaviour
{{
    public static {type_name} Instance {{ get; private set; }}

    public Text scoreText;
    public Text messageText;
{fields}

    private void Awake()
    {{
        Instance = this;
    }}

    public void {set_score}(int score)
    {{
        if (scoreText != null)
        {{
            scoreText.text = scorePrefix + score;
        }}
    }}

    public void {set_message}(string message)
    {{
        if (messageText != null)
        {{
            messageText.text = message;
        }}
    }}
}}
"""


def _effect_statements(rule: InteractionRule, ctx: ManagerContext,
                       fn: dict[str, str], indent: str) -> list[str]:
    """C# statements realizing one interaction effect inside the manager."""
    lines = []
    if rule.effect == "win":
        lines.append(f"{indent}{fn['win']}();")
    elif rule.effect == "gameOver":
        lines.append(f"{indent}{fn['lose']}();")
    elif rule.effect == "scoreDelta":
        delta = rule.effect_arg if rule.effect_arg not in (None, "") else "1"
        try:
            delta = str(int(delta))
        except ValueError:
            delta = "1"
        lines.append(f"{indent}{fn['addScore']}({delta});")
    elif rule.effect == "uiMessage":
        message = csharp_string(rule.effect_arg or "")
        if ctx.ui_manager_type:
            ui = ctx.ui_manager_type
            lines.append(f"{indent}if ({ui}.Instance != null)")
            lines.append(f"{indent}{{")
            lines.append(f"{indent}    {ui}.Instance.{ctx.ui('setMessage')}({message});")
            lines.append(f"{indent}}}")
        else:
            lines.append(f"{indent}Debug.Log({message});")
    elif rule.effect == "destroyObject":
        name = csharp_string(rule.effect_arg or rule.subject)
        lines.append(f"{indent}GameObject destroyTarget = GameObject.Find({name});")
        lines.append(f"{indent}if (destroyTarget != null)")
        lines.append(f"{indent}{{")
        lines.append(f"{indent}    Destroy(destroyTarget);")
        lines.append(f"{indent}}}")
    else:
        lines.append(f"{indent}Debug.Log({csharp_string('interaction ' + rule.id)});")
    return lines


def _render_game_manager(type_name, fields, fn, ctx, bp) -> str:
    ui = ctx.ui_manager_type
    set_score_call = ""
    if ui:
        set_score_call = (
            f"        if ({ui}.Instance != null)\n"
            f"        {{\n"
            f"            {ui}.Instance.{ctx.ui('setScore')}(score);\n"
            f"        }}\n"
        )
    show = []
    if ui:
        show = [
            f"        if ({ui}.Instance != null)",
            "        {",
            f"            {ui}.Instance.{ctx.ui('setMessage')}(message);",
            "        }",
        ]
    else:
        show = ["        Debug.Log(message);"]
    show_block = "\n".join(show)

    key_rules = [r for r in bp.interactions if r.trigger == "keyPress" and r.arg]
    update_block = ""
    if key_rules:
        lines = ["", "    private void Update()", "    {"]
        for rule in key_rules:
            lines.append(f"        if (Input.GetKeyDown(KeyCode.{key_code(rule.arg)}))")
            lines.append("        {")
            lines.extend(_effect_statements(rule, ctx, fn, "            "))
            lines.append("        }")
        lines.append("    }")
        update_block = "\n".join(lines) + "\n"

    score_rules = [
        r for r in bp.interactions
        if r.trigger == "scoreReaches" and r.arg and r.effect != "win"
    ]
    score_lines = [
        "        if (targetScore > 0 && score >= targetScore)",
        "        {",
        f"            {fn['win']}();",
        "        }",
    ]
    for rule in score_rules:
        try:
            threshold = int(rule.arg)
        except (TypeError, ValueError):
            continue
        score_lines.append(f"        if (score >= {threshold})")
        score_lines.append("        {")
        score_lines.extend(_effect_statements(rule, ctx, fn, "            "))
        score_lines.append("        }")
    score_block = "\n".join(score_lines)

    add_score, win, lose = fn["addScore"], fn["win"], fn["lose"]
    return f"""using UnityEngine;

public class {type_name} : MonoBehaviour
{{
    public static {type_name} Instance {{ get; private set; }}

{fields}

    private int score;
    private bool finished;

    private void Awake()
    {{
        Instance = this;
    }}
{update_block}
    public void {add_score}(int amount)
    {{
        if (finished)
        {{
            return;
        }}
        score += amount;
{set_score_call}{score_block}
    }}

    public void {win}()
    {{
        if (finished)
        {{
            return;
        }}
        finished = true;
        ShowEndMessage(winMessage);
        Time.timeScale = 0f;
    }}

    public void {lose}()
    {{
        if (finished)
        {{
            return;
        }}
        finished = true;
        ShowEndMessage(loseMessage);
        Time.timeScale = 0f;
    }}

    private void ShowEndMessage(string message)
    {{
{show_block}
    }}
}}
"""


_RENDERERS = {
    "playerMovement": _render_player_movement,
    "cameraFollow": _render_camera_follow,
    "npcPath": _render_npc_path,
    "collectible": _render_collectible,
    "hazard": _render_hazard,
    "goal": _render_goal,
    "uiManager": _render_ui_manager,
    "gameManager": _render_game_manager,
}


# ---------------------------------------------------------------------------
# Editor scene-builder template
# ---------------------------------------------------------------------------

_PRIMITIVES = {
    "cube": "Cube",
    "sphere": "Sphere",
    "capsule": "Capsule",
    "cylinder": "Cylinder",
    "plane": "Plane",
}

_DEFAULT_COLOR = (1.0, 1.0, 1.0, 1.0)


def render_scene_builder(bp: GameBlueprint, plans) -> str:
    """Emit the editor script that reconstructs the blueprint as a scene.

    plans: ordered script plans (duck-typed: type_name, kind, entity_id,
    required_fields with .field/.ref). One creation block per entity, marked
    with a fixed comment; bindings route through the reflection helper only.
    """
    entity_var = {e.id: f"e{i}" for i, e in enumerate(bp.entities)}
    ui_var = {u.id: f"text{i}" for i, u in enumerate(bp.ui)}

    lines: list[str] = []
    out = lines.append

    out("using UnityEditor;")
    out("using UnityEditor.SceneManagement;")
    out("using UnityEngine;")
    if bp.ui:
        out("using UnityEngine.UI;")
    out(f"using {SUPPORT_NAMESPACE};")
    out("")
    out(f"namespace {GENERATED_NAMESPACE}")
    out("{")
    out("    public static class SceneBuilder")
    out("    {")
    out(f"        private const string ScenePath = {csharp_string(SCENE_PATH)};")
    out("")
    out(f"        [MenuItem({csharp_string(MENU_ENTRY_NAME)})]")
    out("        public static void Build()")
    out("        {")
    out("            var scene = EditorSceneManager.NewScene(NewSceneSetup.EmptyScene, NewSceneMode.Single);")

    for i, entity in enumerate(bp.entities):
        var = entity_var[entity.id]
        out("")
        out(f"            {ENTITY_MARKER}{entity.id}")
        if entity.shape == "asset":
            path = csharp_string(entity.asset_path or "")
            out(f"            var prefab{i} = AssetDatabase.LoadAssetAtPath<GameObject>({path});")
            out(f"            var {var} = prefab{i} != null")
            out(f"                ? (GameObject)PrefabUtility.InstantiatePrefab(prefab{i})")
            out(f"                : new GameObject({csharp_string(entity.name)});")
        else:
            primitive = _PRIMITIVES[entity.shape]
            out(f"            var {var} = GameObject.CreatePrimitive(PrimitiveType.{primitive});")
        out(f"            {var}.name = {csharp_string(entity.name)};")
        out(f"            {var}.transform.position = {vector3(entity.position)};")
        if entity.rotation != (0.0, 0.0, 0.0):
            x, y, z = (csharp_float(v) for v in entity.rotation)
            out(f"            {var}.transform.rotation = Quaternion.Euler({x}, {y}, {z});")
        if entity.scale != (1.0, 1.0, 1.0):
            out(f"            {var}.transform.localScale = {vector3(entity.scale)};")
        if entity.color != _DEFAULT_COLOR:
            out(f"            var renderer{i} = {var}.GetComponent<Renderer>();")
            out(f"            if (renderer{i} != null)")
            out("            {")
            out(f"                var material{i} = new Material(Shader.Find(\"Standard\"));")
            out(f"                material{i}.color = {color4(entity.color)};")
            out(f"                renderer{i}.sharedMaterial = material{i};")
            out("            }")
        if entity.physics.rigidbody:
            out(f"            var body{i} = {var}.AddComponent<Rigidbody>();")
            gravity = "true" if entity.physics.use_gravity else "false"
            out(f"            body{i}.useGravity = {gravity};")
        if entity.physics.collider_is_trigger:
            out(f"            var collider{i} = {var}.GetComponent<Collider>();")
            out(f"            if (collider{i} != null)")
            out("            {")
            out(f"                collider{i}.isTrigger = true;")
            out("            }")
        if entity.tags:
            out(f"            ReflectionHelper.SetTagSafe({var}, {csharp_string(entity.tags[0])});")

    if bp.ui:
        out("")
        out("            // UI canvas")
        out("            var canvasGo = new GameObject(\"Canvas\");")
        out("            var canvas = canvasGo.AddComponent<Canvas>();")
        out("            canvas.renderMode = RenderMode.ScreenSpaceOverlay;")
        out("            canvasGo.AddComponent<CanvasScaler>();")
        out("            canvasGo.AddComponent<GraphicRaycaster>();")
        for i, element in enumerate(bp.ui):
            var = ui_var[element.id]
            out("")
            out(f"            // UI {element.id}")
            out(f"            var uiGo{i} = new GameObject({csharp_string(element.id)});")
            out(f"            uiGo{i}.transform.SetParent(canvasGo.transform, false);")
            out(f"            var {var} = uiGo{i}.AddComponent<Text>();")
            out(f"            {var}.font = Resources.GetBuiltinResource<Font>(\"LegacyRuntime.ttf\");")
            out(f"            {var}.text = {csharp_string(element.initial_text)};")
            out(f"            var rect{i} = uiGo{i}.GetComponent<RectTransform>();")
            if element.kind == "scoreText":
                out(f"            rect{i}.anchorMin = new Vector2(0f, 1f);")
                out(f"            rect{i}.anchorMax = new Vector2(0f, 1f);")
                out(f"            rect{i}.pivot = new Vector2(0f, 1f);")
                out(f"            rect{i}.anchoredPosition = new Vector2(16f, -16f);")
                out(f"            rect{i}.sizeDelta = new Vector2(240f, 40f);")
            else:
                out(f"            rect{i}.anchorMin = new Vector2(0.5f, 0.5f);")
                out(f"            rect{i}.anchorMax = new Vector2(0.5f, 0.5f);")
                out(f"            rect{i}.pivot = new Vector2(0.5f, 0.5f);")
                out(f"            rect{i}.anchoredPosition = Vector2.zero;")
                out(f"            rect{i}.sizeDelta = new Vector2(480f, 80f);")
                out(f"            {var}.alignment = TextAnchor.MiddleCenter;")
                out(f"            {var}.fontSize = 28;")

    camera_parent_var: str | None = None
    for j, plan in enumerate(plans):
        out("")
        out(f"            // BEHAVIOR {plan.type_name}")
        if plan.entity_id is None:
            out(f"            var host{j} = new GameObject({csharp_string(plan.type_name)});")
            out(f"            var c{j} = host{j}.AddComponent<{plan.type_name}>();")
        else:
            var = entity_var[plan.entity_id]
            out(f"            var c{j} = {var}.AddComponent<{plan.type_name}>();")
            if plan.kind == "cameraFollow" and camera_parent_var is None:
                camera_parent_var = var
        for requirement in plan.required_fields:
            ref = requirement.ref
            if isinstance(ref, str) and ref.startswith("entity:"):
                value = entity_var[ref.split(":", 1)[1]]
            elif isinstance(ref, str) and ref.startswith("ui:"):
                value = ui_var[ref.split(":", 1)[1]]
            else:
                value = csharp_literal(ref, infer_ctype(ref))
            out(f"            ReflectionHelper.SetFieldSafe(c{j}, {csharp_string(requirement.field)}, {value});")

    out("")
    out("            // implicit scaffolding: camera and light")
    out("            var cameraGo = new GameObject(\"Main Camera\");")
    out("            cameraGo.tag = \"MainCamera\";")
    out("            cameraGo.AddComponent<Camera>();")
    out("            cameraGo.AddComponent<AudioListener>();")
    if camera_parent_var is not None:
        out(f"            cameraGo.transform.SetParent({camera_parent_var}.transform, false);")
        out("            cameraGo.transform.localPosition = Vector3.zero;")
        out("            cameraGo.transform.localRotation = Quaternion.identity;")
    else:
        out("            cameraGo.transform.position = new Vector3(0f, 6f, -10f);")
        out("            cameraGo.transform.rotation = Quaternion.Euler(30f, 0f, 0f);")
    out("")
    out("            var lightGo = new GameObject(\"Directional Light\");")
    out("            var sun = lightGo.AddComponent<Light>();")
    out("            sun.type = LightType.Directional;")
    out("            lightGo.transform.rotation = Quaternion.Euler(50f, -30f, 0f);")
    out("")
    out("            if (!AssetDatabase.IsValidFolder(\"Assets/Scenes\"))")
    out("            {")
    out("                AssetDatabase.CreateFolder(\"Assets\", \"Scenes\");")
    out("            }")
    out("            EditorSceneManager.SaveScene(scene, ScenePath);")
    out("            Debug.Log(\"scene built: \" + ScenePath);")
    out("        }")
    out("")
    out("        public static void BuildAndExit()")
    out("        {")
    out("            try")
    out("            {")
    out("                Build();")
    out("                EditorApplication.Exit(0);")
    out("            }")
    out("            catch (System.Exception ex)")
    out("            {")
    out("                Debug.LogError(\"scene build failed: \" + ex);")
    out("                EditorApplication.Exit(1);")
    out("            }")
    out("        }")
    out("    }")
    out("}")
    return "\n".join(lines) + "\n"
