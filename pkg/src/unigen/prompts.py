"""Versioned prompt templates loaded from package data.

Templates are plain text files under prompts/ with literal {slot} tokens.
Substitution is plain text replacement (never str.format), so braces inside
schema or code payloads pass through untouched.
"""

from __future__ import annotations

from importlib import resources

SLOTS = ("requirement", "schema", "diagnostics", "blueprint")


class PromptSlotError(Exception):
    """A template slot was left unfilled or an unknown slot was supplied."""


def load_template(name: str) -> str:
    return resources.files("unigen").joinpath(f"prompts/{name}.txt").read_text(encoding="utf-8")


def render_prompt(name: str, **slots: str) -> str:
    for slot in slots:
        if slot not in SLOTS:
            raise PromptSlotError(f"unknown slot {slot!r} for template {name}")
    text = load_template(name)
    for slot, value in slots.items():
        text = text.replace("{" + slot + "}", value)
    for slot in SLOTS:
        if "{" + slot + "}" in text:
            raise PromptSlotError(f"template {name} slot {slot!r} left unfilled")
    return text
