"""unigen: requirements-to-Unity-project pipeline with deterministic replay."""

from .blueprint import (
    BlueprintSchemaError,
    BlueprintSyntaxError,
    GameBlueprint,
    ValidationReport,
    blueprint_hash,
    canonical_serialize,
    parse_blueprint,
    validate,
)
from .gateway import (
    ChatMessage,
    ChatRequest,
    ChatResponse,
    Gateway,
    ReplayMiss,
    TranscriptEntry,
    extract_json,
    request_hash,
)

__version__ = "0.1.0"

__all__ = [
    "BlueprintSchemaError",
    "BlueprintSyntaxError",
    "ChatMessage",
    "ChatRequest",
    "ChatResponse",
    "GameBlueprint",
    "Gateway",
    "ReplayMiss",
    "TranscriptEntry",
    "ValidationReport",
    "blueprint_hash",
    "canonical_serialize",
    "extract_json",
    "parse_blueprint",
    "request_hash",
    "validate",
    "__version__",
]
