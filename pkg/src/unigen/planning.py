"""Stage 1: requirement interpretation and logic-description writing.

Both operations run a bounded validate-and-repair loop against the gateway:
at most MAX_ROUNDS model calls, where every call after the first feeds the
previous round's diagnostics back to the model.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .blueprint import (
    Diagnostic,
    GameBlueprint,
    ValidationReport,
    BlueprintSchemaError,
    BlueprintSyntaxError,
    SCHEMA_SUMMARY,
    blueprint_hash,
    canonical_serialize,
    parse_blueprint,
    validate,
)
from .gateway import (
    ChatMessage,
    ChatRequest,
    Gateway,
    NoJsonFound,
    UnrepairableJson,
    extract_json,
)
from .prompts import render_prompt

MAX_ROUNDS = 2  # total model calls per task: initial attempt + one repair

_SECTION_RE = re.compile(r"^## (Behavior|Interaction): (.+?)\s*$", re.MULTILINE)


class EmptyRequirement(Exception):
    """Requirement text is empty after trimming."""


class BlueprintRejected(Exception):
    """Model output still fails validation after all repair rounds."""

    def __init__(self, report: ValidationReport, rounds: int):
        super().__init__(
            f"blueprint invalid after {rounds} rounds:\n{report.render()}")
        self.report = report
        self.rounds = rounds


class MalformedDescription(Exception):
    """Description sections cannot be matched to blueprint elements."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class LogicDescription:
    markdown: str
    source_blueprint_hash: str

    def sections(self) -> tuple[tuple[str, str], ...]:
        """(kind, name) per titled section, in document order."""
        return tuple((m.group(1), m.group(2)) for m in _SECTION_RE.finditer(self.markdown))


def interpret_requirement(requirement: str, gateway: Gateway) -> GameBlueprint:
    req = requirement.strip()
    if not req:
        raise EmptyRequirement("requirement is empty")

    messages = [
        ChatMessage("system", render_prompt("planning.system", schema=SCHEMA_SUMMARY)),
        ChatMessage("user", req),
    ]
    report = ValidationReport()
    rounds = 0
    for _ in range(MAX_ROUNDS):
        response = gateway.complete(ChatRequest(
            model=gateway.model, messages=tuple(messages), json_mode=True))
        rounds += 1
        bp, report = _parse_and_validate(response.content)
        if bp is not None and report.is_valid:
            return bp
        messages.append(ChatMessage("assistant", response.content))
        messages.append(ChatMessage("user", render_prompt(
            "planning.repair",
            diagnostics=report.render(),
            blueprint=canonical_serialize(bp) if bp is not None else response.content,
        )))
    raise BlueprintRejected(report, rounds)


def _parse_and_validate(content: str) -> tuple[GameBlueprint | None, ValidationReport]:
    try:
        doc = extract_json(content)
    except (NoJsonFound, UnrepairableJson) as exc:
        return None, _report("MODEL_OUTPUT", "/", str(exc))
    try:
        bp = parse_blueprint(json.dumps(doc))
    except BlueprintSyntaxError as exc:
        return None, _report("MODEL_OUTPUT", "/", str(exc))
    except BlueprintSchemaError as exc:
        return None, _report("SCHEMA", exc.path, str(exc))
    return bp, validate(bp)


def _report(code: str, path: str, message: str) -> ValidationReport:
    return ValidationReport((Diagnostic("error", code, path, message),))


def generate_logic_description(bp: GameBlueprint, gateway: Gateway) -> LogicDescription:
    blueprint_json = canonical_serialize(bp)
    messages = [
        ChatMessage("system", render_prompt("description.system")),
        ChatMessage("user", blueprint_json),
    ]
    problems: list[str] = []
    for _ in range(MAX_ROUNDS):
        response = gateway.complete(ChatRequest(
            model=gateway.model, messages=tuple(messages)))
        desc = LogicDescription(
            markdown=response.content,
            source_blueprint_hash=blueprint_hash(bp),
        )
        problems = _section_problems(desc, bp)
        if not problems:
            return desc
        messages.append(ChatMessage("assistant", response.content))
        messages.append(ChatMessage("user", (
            "The description does not match the blueprint:\n"
            + "\n".join(f"- {p}" for p in problems)
            + "\n\nRewrite the full description with exactly one"
            " \"## Behavior: <typeName>\" section per behavior and one"
            " \"## Interaction: <id>\" section per interaction."
        )))
    raise MalformedDescription(problems)


def _section_problems(desc: LogicDescription, bp: GameBlueprint) -> list[str]:
    expected = [("Behavior", b.type_name) for b in bp.behaviors]
    expected += [("Interaction", i.id) for i in bp.interactions]
    got = list(desc.sections())
    problems = []
    for section in expected:
        if got.count(section) == 0:
            problems.append(f"missing section \"## {section[0]}: {section[1]}\"")
        elif got.count(section) > 1:
            problems.append(f"duplicated section \"## {section[0]}: {section[1]}\"")
    for section in got:
        if section not in expected:
            problems.append(f"unexpected section \"## {section[0]}: {section[1]}\"")
    return problems
