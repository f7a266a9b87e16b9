"""Chat-completion providers.

The orchestrator talks to a small protocol: give it wire-format messages and
tool schemas, get back either assistant text or tool calls. ``HttpChatProvider``
speaks the common chat-completions HTTP dialect; ``ScriptedChatProvider``
replays a canned script for deterministic offline tests.
"""
from __future__ import annotations

import copy
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import httpx

from .errors import ProviderError, ScriptExhausted


@dataclass(frozen=True)
class ToolCall:
    id: str
    name: str
    # raw JSON string exactly as the model produced it; parsed by the caller
    arguments: str


@dataclass(frozen=True)
class ProviderResponse:
    """Exactly one of assistant text or tool calls, never both or neither."""

    text: str | None = None
    tool_calls: tuple[ToolCall, ...] = ()

    def __post_init__(self):
        if (self.text is None) == (not self.tool_calls):
            raise ValueError("response must carry either text or tool calls")

    @classmethod
    def from_text(cls, text: str) -> "ProviderResponse":
        return cls(text=text)

    @classmethod
    def from_tool_calls(cls, *calls: ToolCall) -> "ProviderResponse":
        return cls(tool_calls=tuple(calls))


@dataclass(frozen=True)
class ProviderRequest:
    messages: tuple[dict, ...]
    tools: tuple[dict, ...]
    model: str
    temperature: float


class ChatProvider(Protocol):
    def complete(self, request: ProviderRequest) -> ProviderResponse: ...


def _parse_completion(payload: dict) -> ProviderResponse:
    try:
        message = payload["choices"][0]["message"]
    except (KeyError, IndexError, TypeError) as exc:
        raise ProviderError(f"malformed completion payload: {exc!r}", retriable=False) from exc
    raw_calls = message.get("tool_calls") or []
    if raw_calls:
        calls = []
        for call in raw_calls:
            try:
                calls.append(ToolCall(
                    id=call["id"],
                    name=call["function"]["name"],
                    arguments=call["function"]["arguments"],
                ))
            except (KeyError, TypeError) as exc:
                raise ProviderError(f"malformed tool call in completion: {exc!r}", retriable=False) from exc
        return ProviderResponse(tool_calls=tuple(calls))
    content = message.get("content")
    if not isinstance(content, str) or not content.strip():
        raise ProviderError("completion carried neither text nor tool calls", retriable=False)
    return ProviderResponse(text=content)


class HttpChatProvider:
    """Chat-completions client with bounded retries.

    Retries transport failures, 429, and 5xx with exponential backoff; other
    HTTP errors surface immediately as non-retriable.
    """

    def __init__(
        self,
        base_url: str,
        api_key: str,
        *,
        timeout: float = 60.0,
        max_retries: int = 2,
        sleep: Callable[[float], None] = time.sleep,
        client: httpx.Client | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.max_retries = max_retries
        self._sleep = sleep
        self._client = client or httpx.Client(timeout=timeout)

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        payload: dict = {
            "model": request.model,
            "messages": list(request.messages),
            "temperature": request.temperature,
        }
        if request.tools:
            payload["tools"] = list(request.tools)
            payload["tool_choice"] = "auto"
        headers = {"Authorization": f"Bearer {self.api_key}"}
        url = f"{self.base_url}/chat/completions"

        last_error: ProviderError | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(0.5 * 2 ** (attempt - 1))
            try:
                response = self._client.post(url, json=payload, headers=headers)
            except httpx.HTTPError as exc:
                last_error = ProviderError(f"transport failure: {exc}", retriable=True)
                continue
            if response.status_code == 429 or response.status_code >= 500:
                last_error = ProviderError(
                    f"provider returned HTTP {response.status_code}",
                    status=response.status_code,
                    retriable=True,
                )
                continue
            if response.status_code >= 400:
                raise ProviderError(
                    f"provider returned HTTP {response.status_code}: {response.text[:200]}",
                    status=response.status_code,
                    retriable=False,
                )
            try:
                body = response.json()
            except ValueError as exc:
                raise ProviderError("provider returned non-JSON body", retriable=False) from exc
            return _parse_completion(body)
        assert last_error is not None
        raise last_error


@dataclass
class ScriptedChatProvider:
    """Replays a fixed response script; records every request it sees."""

    script: list[ProviderResponse]
    requests: list[ProviderRequest] = field(default_factory=list)
    _position: int = 0

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        self.requests.append(copy.deepcopy(request))
        if self._position >= len(self.script):
            raise ScriptExhausted(
                f"script exhausted after {len(self.script)} responses"
            )
        response = self.script[self._position]
        self._position += 1
        return response
