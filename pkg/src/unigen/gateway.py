"""Provider-agnostic chat-completion access with live, record, and replay modes.

Replay serves stored responses keyed by a canonical request hash, so any
pipeline built on the gateway runs deterministically offline. Record is live
plus an append-only transcript; prompt edits change the hash and invalidate
fixtures loudly (ReplayMiss) instead of silently drifting.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from .common import canonical_json, isoformat_utc, sha256_text, utc_now

ENV_BASE_URL = "UNIGEN_LLM_BASE_URL"
ENV_MODEL = "UNIGEN_LLM_MODEL"
ENV_API_KEY = "UNIGEN_LLM_API_KEY"

GATEWAY_MODES = ("live", "record", "replay")

DEFAULT_TEMPERATURE = 0.2
DEFAULT_TIMEOUT = 120.0
DEFAULT_RETRIES = 3
DEFAULT_BACKOFF = 1.0


class GatewayConfigError(Exception):
    """Gateway built without the configuration its mode requires."""


class ProviderError(Exception):
    """Provider call failed after the configured retries."""


class GatewayTimeout(Exception):
    """Provider call exceeded the per-call timeout."""


class ReplayMiss(Exception):
    """No stored transcript entry for a request hash; fixture has drifted."""

    def __init__(self, request_hash: str):
        super().__init__(f"no transcript entry for request hash {request_hash}")
        self.request_hash = request_hash


class NoJsonFound(Exception):
    """Model output contains no JSON document at all."""


class UnrepairableJson(Exception):
    """A JSON candidate was found but cannot be parsed, even after repair."""

    def __init__(self, cause: json.JSONDecodeError):
        super().__init__(f"unparseable document: {cause}")
        self.cause = cause


@dataclass(frozen=True)
class ChatMessage:
    role: str  # "system" | "user" | "assistant"
    content: str


@dataclass(frozen=True)
class ChatRequest:
    model: str
    messages: tuple[ChatMessage, ...]
    temperature: float = DEFAULT_TEMPERATURE
    json_mode: bool = False

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be nonempty")
        if self.messages[0].role not in ("system", "user"):
            raise ValueError("first message role must be system or user")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "messages": [{"role": m.role, "content": m.content} for m in self.messages],
            "temperature": self.temperature,
            "jsonMode": self.json_mode,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ChatRequest":
        return cls(
            model=doc["model"],
            messages=tuple(ChatMessage(m["role"], m["content"]) for m in doc["messages"]),
            temperature=doc.get("temperature", DEFAULT_TEMPERATURE),
            json_mode=doc.get("jsonMode", False),
        )


@dataclass(frozen=True)
class ChatResponse:
    content: str
    finish_reason: str = "stop"  # "stop" | "length" | "error"
    prompt_tokens: int = 0
    completion_tokens: int = 0

    def __post_init__(self):
        if self.finish_reason == "stop" and not self.content:
            raise ValueError("content must be nonempty when finishReason is stop")

    def to_json(self) -> dict:
        return {
            "content": self.content,
            "finishReason": self.finish_reason,
            "usage": {
                "promptTokens": self.prompt_tokens,
                "completionTokens": self.completion_tokens,
            },
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ChatResponse":
        usage = doc.get("usage", {})
        return cls(
            content=doc["content"],
            finish_reason=doc.get("finishReason", "stop"),
            prompt_tokens=usage.get("promptTokens", 0),
            completion_tokens=usage.get("completionTokens", 0),
        )


@dataclass(frozen=True)
class TranscriptEntry:
    request_hash: str
    request: ChatRequest
    response: ChatResponse
    timestamp: str

    def to_json(self) -> dict:
        return {
            "requestHash": self.request_hash,
            "request": self.request.to_json(),
            "response": self.response.to_json(),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TranscriptEntry":
        return cls(
            request_hash=doc["requestHash"],
            request=ChatRequest.from_json(doc["request"]),
            response=ChatResponse.from_json(doc["response"]),
            timestamp=doc["timestamp"],
        )


def request_hash(req: ChatRequest) -> str:
    """Canonical hash of a request: sorted keys, message content verbatim."""
    return sha256_text(canonical_json(req.to_json()))


# ---------------------------------------------------------------------------
# Transcript store
# ---------------------------------------------------------------------------

class TranscriptStore:
    """Append-only JSONL transcript; one TranscriptEntry per line."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def load(self) -> list[TranscriptEntry]:
        if not self.path.exists():
            return []
        entries = []
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                entries.append(TranscriptEntry.from_json(json.loads(line)))
        return entries

    def append(self, entry: TranscriptEntry) -> None:
        # Single-writer contract: whole lines appended under a lock so readers
        # never observe a torn entry.
        line = json.dumps(entry.to_json(), ensure_ascii=False) + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line)


# ---------------------------------------------------------------------------
# Transports
# ---------------------------------------------------------------------------

Transport = Callable[[ChatRequest], ChatResponse]


def http_transport_from_env(timeout: float = DEFAULT_TIMEOUT) -> Transport:
    """Chat-completions-style HTTPS transport configured via environment."""
    base_url = os.environ.get(ENV_BASE_URL)
    api_key = os.environ.get(ENV_API_KEY)
    if not base_url or not api_key:
        raise GatewayConfigError(
            f"live/record mode requires {ENV_BASE_URL} and {ENV_API_KEY}")

    def transport(req: ChatRequest) -> ChatResponse:
        import requests

        payload: dict[str, Any] = {
            "model": req.model,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
            "temperature": req.temperature,
        }
        if req.json_mode:
            payload["response_format"] = {"type": "json_object"}
        try:
            resp = requests.post(
                base_url.rstrip("/") + "/chat/completions",
                json=payload,
                headers={"Authorization": f"Bearer {api_key}"},
                timeout=timeout,
            )
        except requests.Timeout as exc:
            raise GatewayTimeout(f"provider call exceeded {timeout}s") from exc
        if resp.status_code != 200:
            raise ProviderError(f"provider returned {resp.status_code}: {resp.text[:500]}")
        body = resp.json()
        choice = body["choices"][0]
        usage = body.get("usage", {})
        return ChatResponse(
            content=choice["message"]["content"],
            finish_reason=choice.get("finish_reason", "stop"),
            prompt_tokens=usage.get("prompt_tokens", 0),
            completion_tokens=usage.get("completion_tokens", 0),
        )

    return transport


# ---------------------------------------------------------------------------
# Gateway
# ---------------------------------------------------------------------------

class Gateway:
    """complete() dispatcher over the three modes.

    live    -> provider with bounded retries
    record  -> live, plus a TranscriptEntry appended per call
    replay  -> stored response for the request hash, consumed in recording
               order when several entries share a hash; no network
    """

    def __init__(
        self,
        mode: str,
        transcript_path: Path | None = None,
        transport: Transport | None = None,
        model: str | None = None,
        max_retries: int = DEFAULT_RETRIES,
        backoff: float = DEFAULT_BACKOFF,
        timeout: float = DEFAULT_TIMEOUT,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if mode not in GATEWAY_MODES:
            raise GatewayConfigError(f"unknown gateway mode {mode!r}")
        self.mode = mode
        self.model = model or os.environ.get(ENV_MODEL, "gpt-4.1")
        self._max_retries = max_retries
        self._backoff = backoff
        self._sleep = sleep
        self._store: TranscriptStore | None = None
        self._replay_queues: dict[str, deque[ChatResponse]] = {}
        self._replay_lock = threading.Lock()

        if mode == "replay":
            if transcript_path is None:
                raise GatewayConfigError("replay mode requires a transcript path")
            self._store = TranscriptStore(transcript_path)
            for entry in self._store.load():
                self._replay_queues.setdefault(entry.request_hash, deque()).append(entry.response)
            self._transport: Transport | None = None
        else:
            if mode == "record":
                if transcript_path is None:
                    raise GatewayConfigError("record mode requires a transcript path")
                self._store = TranscriptStore(transcript_path)
            self._transport = transport or http_transport_from_env(timeout=timeout)

    def complete(self, req: ChatRequest) -> ChatResponse:
        if self.mode == "replay":
            return self._replay(req)
        response = self._call_with_retries(req)
        if self.mode == "record":
            assert self._store is not None
            self._store.append(TranscriptEntry(
                request_hash=request_hash(req),
                request=req,
                response=response,
                timestamp=isoformat_utc(utc_now()),
            ))
        return response

    def _replay(self, req: ChatRequest) -> ChatResponse:
        h = request_hash(req)
        with self._replay_lock:
            queue = self._replay_queues.get(h)
            if not queue:
                raise ReplayMiss(h)
            return queue.popleft()

    def _call_with_retries(self, req: ChatRequest) -> ChatResponse:
        assert self._transport is not None
        last: Exception | None = None
        for attempt in range(self._max_retries):
            try:
                return self._transport(req)
            except GatewayTimeout:
                raise  # a timed-out attempt already consumed the full budget
            except Exception as exc:
                last = exc
                if attempt + 1 < self._max_retries:
                    self._sleep(self._backoff * (2 ** attempt))
        raise ProviderError(
            f"provider call failed after {self._max_retries} attempts: {last}") from last


# ---------------------------------------------------------------------------
# Output extraction
# ---------------------------------------------------------------------------

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_+-]*[ \t]*\n(.*?)```", re.DOTALL)
_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")


def extract_json(text: str) -> Any:
    """Pull the first top-level JSON document out of model output.

    Strips markdown fences and surrounding prose; applies at most one
    mechanical repair pass (trailing-comma removal).
    """
    candidates = [m.group(1) for m in _FENCE_RE.finditer(text)]
    body = _first_balanced_document(text)
    if body is not None:
        candidates.append(body)
    if not candidates:
        raise NoJsonFound("no JSON document found in model output")

    last_error: json.JSONDecodeError | None = None
    for candidate in candidates:
        candidate = candidate.strip()
        inner = candidate if candidate.startswith(("{", "[")) \
            else _first_balanced_document(candidate)
        if inner is None:
            continue
        try:
            return json.loads(inner)
        except json.JSONDecodeError as exc:
            last_error = exc
        repaired = _TRAILING_COMMA_RE.sub(r"\1", inner)
        if repaired != inner:
            try:
                return json.loads(repaired)
            except json.JSONDecodeError as exc:
                last_error = exc
    if last_error is None:
        raise NoJsonFound("no JSON document found in model output")
    raise UnrepairableJson(last_error)


def _first_balanced_document(text: str) -> str | None:
    """Slice from the first opener to its balanced closer, string-aware."""
    start = None
    for i, ch in enumerate(text):
        if ch in "{[":
            start = i
            break
    if start is None:
        return None
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth == 0:
                return text[start:i + 1]
    return text[start:]  # truncated output: let the parser report it


def extract_code_block(text: str, language: str = "csharp") -> str:
    """Return the first fenced code block, preferring the given language tag;
    fall back to the whole text when no fence is present."""
    tagged = re.search(
        rf"```{re.escape(language)}[ \t]*\n(.*?)```", text, re.DOTALL | re.IGNORECASE)
    if tagged:
        return tagged.group(1).strip("\n")
    any_fence = _FENCE_RE.search(text)
    if any_fence:
        return any_fence.group(1).strip("\n")
    return text.strip()
