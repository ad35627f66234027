from __future__ import annotations

import json
import threading

import pytest

from fakes import QueueTransport
from unigen.gateway import (
    ChatMessage,
    ChatRequest,
    ChatResponse,
    Gateway,
    GatewayConfigError,
    GatewayTimeout,
    NoJsonFound,
    ProviderError,
    ReplayMiss,
    TranscriptEntry,
    TranscriptStore,
    UnrepairableJson,
    extract_code_block,
    extract_json,
    http_transport_from_env,
    request_hash,
)


def make_request(content: str = "hello", **kwargs) -> ChatRequest:
    return ChatRequest(
        model="test-model",
        messages=(ChatMessage("system", "be brief"), ChatMessage("user", content)),
        **kwargs,
    )


class TestRequestModel:
    def test_messages_must_be_nonempty(self):
        with pytest.raises(ValueError):
            ChatRequest(model="m", messages=())

    def test_first_role_must_open_the_conversation(self):
        with pytest.raises(ValueError):
            ChatRequest(model="m", messages=(ChatMessage("assistant", "hi"),))

    def test_temperature_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            make_request(temperature=-0.1)

    def test_stop_response_needs_content(self):
        with pytest.raises(ValueError):
            ChatResponse(content="", finish_reason="stop")
        ChatResponse(content="", finish_reason="length")  # fine

    def test_request_round_trips_through_json(self):
        req = make_request(json_mode=True, temperature=0.7)
        assert ChatRequest.from_json(req.to_json()) == req

    def test_transcript_entry_round_trips(self):
        req = make_request()
        entry = TranscriptEntry(
            request_hash=request_hash(req),
            request=req,
            response=ChatResponse(content="hi", prompt_tokens=3, completion_tokens=1),
            timestamp="2026-08-19T00:00:00.000000Z",
        )
        assert TranscriptEntry.from_json(entry.to_json()) == entry


class TestRequestHash:
    def test_equal_requests_hash_equal(self):
        assert request_hash(make_request()) == request_hash(make_request())

    def test_content_verbatim(self):
        # whitespace differences in content must change the hash
        assert request_hash(make_request("a  b")) != request_hash(make_request("a b"))

    def test_settings_participate(self):
        base = request_hash(make_request())
        assert request_hash(make_request(json_mode=True)) != base
        assert request_hash(make_request(temperature=0.9)) != base

    def test_recomputable_from_stored_request(self, tmp_path):
        store = TranscriptStore(tmp_path / "t.jsonl")
        req = make_request("stored")
        store.append(TranscriptEntry(request_hash(req), req,
                                     ChatResponse(content="ok"), "ts"))
        loaded = store.load()[0]
        assert request_hash(loaded.request) == loaded.request_hash


class TestModes:
    def test_unknown_mode_rejected(self, tmp_path):
        with pytest.raises(GatewayConfigError):
            Gateway(mode="cached", transcript_path=tmp_path / "t.jsonl")

    def test_record_requires_transcript_path(self):
        with pytest.raises(GatewayConfigError):
            Gateway(mode="record", transport=QueueTransport([]))

    def test_replay_requires_transcript_path(self):
        with pytest.raises(GatewayConfigError):
            Gateway(mode="replay")

    def test_live_without_provider_config_rejected(self, monkeypatch):
        monkeypatch.delenv("UNIGEN_LLM_BASE_URL", raising=False)
        monkeypatch.delenv("UNIGEN_LLM_API_KEY", raising=False)
        with pytest.raises(GatewayConfigError):
            Gateway(mode="live")

    def test_record_appends_exactly_one_entry_per_call(self, tmp_path):
        path = tmp_path / "t.jsonl"
        gateway = Gateway(mode="record", transcript_path=path,
                          transport=QueueTransport(["one", "two"]))
        gateway.complete(make_request("first"))
        assert len(TranscriptStore(path).load()) == 1
        gateway.complete(make_request("second"))
        entries = TranscriptStore(path).load()
        assert len(entries) == 2
        assert [e.response.content for e in entries] == ["one", "two"]

    def test_replay_serves_stored_response(self, tmp_path):
        path = tmp_path / "t.jsonl"
        recorder = Gateway(mode="record", transcript_path=path,
                           transport=QueueTransport(["answer"]))
        req = make_request("question")
        recorded = recorder.complete(req)
        replayer = Gateway(mode="replay", transcript_path=path)
        assert replayer.complete(make_request("question")) == recorded

    def test_replay_never_touches_a_transport(self, tmp_path, monkeypatch):
        monkeypatch.delenv("UNIGEN_LLM_BASE_URL", raising=False)
        monkeypatch.delenv("UNIGEN_LLM_API_KEY", raising=False)
        path = tmp_path / "t.jsonl"
        Gateway(mode="record", transcript_path=path,
                transport=QueueTransport(["x"])).complete(make_request())

        def poisoned(req):
            raise AssertionError("replay must not call the transport")

        replayer = Gateway(mode="replay", transcript_path=path, transport=poisoned)
        assert replayer.complete(make_request()).content == "x"

    def test_replay_miss_names_the_hash(self, tmp_path):
        path = tmp_path / "t.jsonl"
        path.write_text("", encoding="utf-8")
        gateway = Gateway(mode="replay", transcript_path=path)
        unseen = make_request("never recorded")
        with pytest.raises(ReplayMiss) as excinfo:
            gateway.complete(unseen)
        assert excinfo.value.request_hash == request_hash(unseen)
        assert request_hash(unseen) in str(excinfo.value)

    def test_duplicate_hashes_replay_in_recording_order(self, tmp_path):
        path = tmp_path / "t.jsonl"
        recorder = Gateway(mode="record", transcript_path=path,
                           transport=QueueTransport(["first", "second"]))
        recorder.complete(make_request("same prompt"))
        recorder.complete(make_request("same prompt"))
        replayer = Gateway(mode="replay", transcript_path=path)
        assert replayer.complete(make_request("same prompt")).content == "first"
        assert replayer.complete(make_request("same prompt")).content == "second"
        with pytest.raises(ReplayMiss):
            replayer.complete(make_request("same prompt"))


class TestRetries:
    def test_transient_failures_are_retried_with_backoff(self):
        sleeps: list[float] = []
        transport = QueueTransport([
            ConnectionError("reset"), ConnectionError("reset"), "recovered"])
        gateway = Gateway(mode="live", transport=transport,
                          sleep=sleeps.append)
        assert gateway.complete(make_request()).content == "recovered"
        assert sleeps == [1.0, 2.0]  # exponential from 1 s

    def test_provider_error_after_all_retries(self):
        transport = QueueTransport([ConnectionError("a"), ConnectionError("b"),
                                    ConnectionError("c")])
        gateway = Gateway(mode="live", transport=transport, sleep=lambda _: None)
        with pytest.raises(ProviderError):
            gateway.complete(make_request())
        assert len(transport.requests) == 3

    def test_timeout_is_not_retried(self):
        transport = QueueTransport([GatewayTimeout("too slow")])
        gateway = Gateway(mode="live", transport=transport, sleep=lambda _: None)
        with pytest.raises(GatewayTimeout):
            gateway.complete(make_request())
        assert len(transport.requests) == 1

    def test_nothing_recorded_for_failed_calls(self, tmp_path):
        path = tmp_path / "t.jsonl"
        gateway = Gateway(
            mode="record", transcript_path=path, sleep=lambda _: None,
            transport=QueueTransport([ConnectionError("a")] * 3))
        with pytest.raises(ProviderError):
            gateway.complete(make_request())
        assert TranscriptStore(path).load() == []


class TestTranscriptStore:
    def test_missing_file_loads_empty(self, tmp_path):
        assert TranscriptStore(tmp_path / "absent.jsonl").load() == []

    def test_concurrent_appends_never_tear(self, tmp_path):
        store = TranscriptStore(tmp_path / "t.jsonl")
        req = make_request()

        def append_some(tag: int) -> None:
            for i in range(5):
                store.append(TranscriptEntry(
                    request_hash(req), req,
                    ChatResponse(content=f"{tag}-{i}"), "ts"))

        threads = [threading.Thread(target=append_some, args=(t,)) for t in range(8)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        entries = store.load()
        assert len(entries) == 40
        assert {e.response.content for e in entries} == {
            f"{t}-{i}" for t in range(8) for i in range(5)}


class TestHttpTransport:
    class _FakeResponse:
        def __init__(self, status_code: int, body: dict):
            self.status_code = status_code
            self._body = body
            self.text = json.dumps(body)

        def json(self) -> dict:
            return self._body

    def test_posts_chat_completions_with_bearer_auth(self, monkeypatch):
        monkeypatch.setenv("UNIGEN_LLM_BASE_URL", "https://llm.example/v1/")
        monkeypatch.setenv("UNIGEN_LLM_API_KEY", "sk-test")
        captured = {}

        def fake_post(url, json=None, headers=None, timeout=None):
            captured.update(url=url, payload=json, headers=headers, timeout=timeout)
            return self._FakeResponse(200, {
                "choices": [{"message": {"content": "pong"}, "finish_reason": "stop"}],
                "usage": {"prompt_tokens": 7, "completion_tokens": 2},
            })

        import requests
        monkeypatch.setattr(requests, "post", fake_post)
        transport = http_transport_from_env()
        response = transport(make_request(json_mode=True))
        assert captured["url"] == "https://llm.example/v1/chat/completions"
        assert captured["headers"]["Authorization"] == "Bearer sk-test"
        assert captured["payload"]["response_format"] == {"type": "json_object"}
        assert response.content == "pong"
        assert response.prompt_tokens == 7

    def test_non_200_is_a_provider_error(self, monkeypatch):
        monkeypatch.setenv("UNIGEN_LLM_BASE_URL", "https://llm.example")
        monkeypatch.setenv("UNIGEN_LLM_API_KEY", "sk-test")
        import requests
        monkeypatch.setattr(
            requests, "post",
            lambda *a, **k: self._FakeResponse(503, {"error": "down"}))
        with pytest.raises(ProviderError):
            http_transport_from_env()(make_request())

    def test_timeout_maps_to_gateway_timeout(self, monkeypatch):
        monkeypatch.setenv("UNIGEN_LLM_BASE_URL", "https://llm.example")
        monkeypatch.setenv("UNIGEN_LLM_API_KEY", "sk-test")
        import requests

        def slow_post(*args, **kwargs):
            raise requests.Timeout("deadline")

        monkeypatch.setattr(requests, "post", slow_post)
        with pytest.raises(GatewayTimeout):
            http_transport_from_env()(make_request())


class TestExtractJson:
    def test_fenced_document(self):
        assert extract_json('```json\n{"a": 1}\n```') == {"a": 1}

    def test_prose_wrapped_document(self):
        text = 'Here is the blueprint: {"a": 1} hope it helps'
        assert extract_json(text) == {"a": 1}

    def test_trailing_comma_repair(self):
        assert extract_json('{"a": 1,}') == {"a": 1}
        assert extract_json('[1, 2, 3,]') == [1, 2, 3]

    def test_braces_inside_strings_do_not_confuse_scanning(self):
        text = 'note {"text": "closing } inside", "n": 2} trailing'
        assert extract_json(text) == {"text": "closing } inside", "n": 2}

    def test_nested_documents_return_the_outermost(self):
        assert extract_json('{"outer": {"inner": [1, {"deep": true}]}}') == {
            "outer": {"inner": [1, {"deep": True}]}}

    def test_no_document_at_all(self):
        with pytest.raises(NoJsonFound):
            extract_json("I could not produce a blueprint, sorry.")

    def test_unrepairable_document(self):
        with pytest.raises(UnrepairableJson) as excinfo:
            extract_json('{"a": unquoted}')
        assert excinfo.value.cause is not None

    def test_fenced_document_wins_over_prose_braces(self):
        text = 'plan {broken\n```json\n{"a": 2}\n```'
        assert extract_json(text) == {"a": 2}


class TestExtractCodeBlock:
    def test_prefers_the_language_tagged_fence(self):
        text = "```text\nnotes\n```\n```csharp\nclass A {}\n```"
        assert extract_code_block(text) == "class A {}"

    def test_falls_back_to_any_fence(self):
        assert extract_code_block("```\nclass B {}\n```") == "class B {}"

    def test_falls_back_to_whole_text(self):
        assert extract_code_block("  class C {}\n") == "class C {}"
