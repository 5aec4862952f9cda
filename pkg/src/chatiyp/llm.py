"""Provider abstraction for chat completion and embeddings, prompt templates,
and a deterministic scripted provider for offline runs.

Remote access follows the de-facto chat-completions / embeddings JSON
conventions; connection settings come from the environment
(IYP_LLM_BASE_URL, IYP_LLM_API_KEY, IYP_CHAT_MODEL, IYP_EMBED_MODEL).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
import struct
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, List, Optional, Sequence, Tuple

import httpx


class ProviderError(RuntimeError):
    """Raised when a provider cannot complete a request."""


class ScriptError(ProviderError):
    """A scripted provider had no matching entry: the test script is wrong."""


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"invalid role {self.role!r}")
        if self.content is None:
            raise ValueError("message content may not be None")


@dataclass(frozen=True)
class ChatParams:
    temperature: float = 0.0
    max_tokens: int = 1024
    timeout: float = 30.0
    retries: int = 2


@dataclass(frozen=True)
class Completion:
    text: str
    token_scores: Optional[Tuple[Tuple[str, float], ...]] = None


def chat(provider, messages: Sequence[ChatMessage], params: Optional[ChatParams] = None,
         backoff: float = 0.25) -> Completion:
    """Call the provider with retries and exponential backoff on failure."""
    if not messages:
        raise ValueError("messages must be non-empty")
    params = params or ChatParams()
    last_error = None
    for attempt in range(params.retries + 1):
        try:
            return provider.complete(list(messages), params)
        except ScriptError:
            raise  # a script bug is not transient
        except ProviderError as exc:
            last_error = exc
            if attempt < params.retries:
                time.sleep(backoff * (2 ** attempt))
    raise ProviderError(
        f"provider failed after {params.retries + 1} attempts: {last_error}"
    ) from last_error


def embed(provider, texts: Sequence[str]) -> List[List[float]]:
    """Embed a batch of texts; order-preserving, one vector per input."""
    if not texts:
        raise ValueError("texts must be non-empty")
    vectors = provider.embed_batch(list(texts))
    if len(vectors) != len(texts):
        raise ProviderError(
            f"provider returned {len(vectors)} vectors for {len(texts)} texts"
        )
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise ProviderError(f"embedding dimension mismatch within batch: {sorted(dims)}")
    return vectors


# --------------------------------------------------------------------------
# Prompt templates
# --------------------------------------------------------------------------

_SLOT_RE = re.compile(r"\{(\w+)\}")


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    messages: Tuple[ChatMessage, ...]
    required_slots: frozenset


def load_template(name: str) -> PromptTemplate:
    """Load a shipped prompt template by id from the package data."""
    data = resources.files("chatiyp").joinpath(f"prompts/{name}.json").read_text("utf-8")
    return template_from_dict(json.loads(data))


def template_from_dict(obj: dict) -> PromptTemplate:
    return PromptTemplate(
        id=obj["id"],
        messages=tuple(ChatMessage(m["role"], m["content"]) for m in obj["messages"]),
        required_slots=frozenset(obj.get("required_slots", [])),
    )


def render_prompt(template: PromptTemplate, slots: dict) -> List[ChatMessage]:
    """Single-pass slot substitution; slot values are inserted verbatim."""
    missing = template.required_slots - set(slots)
    if missing:
        raise KeyError(f"missing required slots: {sorted(missing)}")

    def substitute(text: str) -> str:
        return _SLOT_RE.sub(
            lambda m: str(slots[m.group(1)]) if m.group(1) in slots else m.group(0), text
        )

    return [ChatMessage(m.role, substitute(m.content)) for m in template.messages]


# --------------------------------------------------------------------------
# Scripted provider (offline deterministic test double)
# --------------------------------------------------------------------------


@dataclass
class ScriptEntry:
    match: object  # "*" | substring | list of substrings (all must match)
    response: str
    token_scores: Optional[Tuple[Tuple[str, float], ...]] = None
    one_shot: bool = False
    fail: bool = False  # simulate a transient provider failure
    consumed: bool = False

    def matches(self, text: str) -> bool:
        if self.consumed:
            return False
        if self.match == "*":
            return True
        if isinstance(self.match, str):
            return self.match in text
        return all(part in text for part in self.match)


class ScriptedProvider:
    """Deterministic provider: chat answers come from an ordered script and
    embeddings from a seeded hash, so equal texts always embed equally."""

    def __init__(self, script: Sequence = (), seed: int = 0, dim: int = 8,
                 embeddings: Optional[dict] = None, provider_id: str = "scripted"):
        self._entries = [self._coerce(entry) for entry in script]
        self._seed = seed
        self._dim = dim
        self._embeddings = dict(embeddings or {})
        self._lock = threading.Lock()
        self.provider_id = provider_id

    @staticmethod
    def _coerce(entry) -> ScriptEntry:
        if isinstance(entry, ScriptEntry):
            return entry
        if isinstance(entry, dict):
            scores = entry.get("token_scores")
            if isinstance(scores, dict):
                scores = tuple(sorted(scores.items()))
            elif scores is not None:
                scores = tuple((t, p) for t, p in scores)
            return ScriptEntry(
                match=entry.get("match_all", entry.get("match", "*")),
                response=entry.get("response", ""),
                token_scores=scores,
                one_shot=bool(entry.get("one_shot", False)),
                fail=bool(entry.get("fail", False)),
            )
        matcher, response = entry[0], entry[1]
        scores = tuple(entry[2]) if len(entry) > 2 and entry[2] is not None else None
        return ScriptEntry(match=matcher, response=response, token_scores=scores)

    @classmethod
    def from_file(cls, path: str) -> "ScriptedProvider":
        with open(path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        return cls(
            script=spec.get("entries", []),
            seed=spec.get("seed", 0),
            dim=spec.get("dim", 8),
            embeddings=spec.get("embeddings"),
            provider_id=spec.get("provider_id", "scripted"),
        )

    def complete(self, messages: List[ChatMessage], params: ChatParams) -> Completion:
        last_user = next(
            (m.content for m in reversed(messages) if m.role == "user"), ""
        )
        with self._lock:
            for entry in self._entries:
                if entry.matches(last_user):
                    if entry.one_shot:
                        entry.consumed = True
                    if entry.fail:
                        raise ProviderError("scripted transient failure")
                    return Completion(text=entry.response, token_scores=entry.token_scores)
        raise ScriptError(
            f"no scripted response matches last user message: {last_user[:200]!r}"
        )

    def embed_batch(self, texts: List[str]) -> List[List[float]]:
        return [self._embed_one(text) for text in texts]

    def _embed_one(self, text: str) -> List[float]:
        if text in self._embeddings:
            return list(self._embeddings[text])
        return hash_embedding(text, seed=self._seed, dim=self._dim)


def hash_embedding(text: str, seed: int = 0, dim: int = 8) -> List[float]:
    """Map text to a deterministic unit vector via SHA-256."""
    values: List[float] = []
    counter = 0
    while len(values) < dim:
        digest = hashlib.sha256(f"{seed}:{counter}:{text}".encode("utf-8")).digest()
        for i in range(0, len(digest) - 7, 8):
            (raw,) = struct.unpack(">q", digest[i : i + 8])
            values.append(raw / float(2**63))
            if len(values) == dim:
                break
        counter += 1
    norm = math.sqrt(sum(v * v for v in values))
    if norm == 0:
        values[0] = 1.0
        norm = 1.0
    return [v / norm for v in values]


# --------------------------------------------------------------------------
# Remote JSON-over-HTTP provider
# --------------------------------------------------------------------------


class HttpProvider:
    """Chat-completions / embeddings client configured from the environment."""

    def __init__(self, base_url: Optional[str] = None, api_key: Optional[str] = None,
                 chat_model: Optional[str] = None, embed_model: Optional[str] = None,
                 client: Optional[httpx.Client] = None):
        self.base_url = (base_url or os.environ.get("IYP_LLM_BASE_URL", "")).rstrip("/")
        if not self.base_url:
            raise ProviderError("no LLM base URL configured (IYP_LLM_BASE_URL)")
        self.api_key = api_key or os.environ.get("IYP_LLM_API_KEY", "")
        self.chat_model = chat_model or os.environ.get("IYP_CHAT_MODEL", "gpt-3.5-turbo")
        self.embed_model = embed_model or os.environ.get(
            "IYP_EMBED_MODEL", "text-embedding-3-small"
        )
        self._client = client or httpx.Client()
        self.provider_id = f"http:{self.base_url}:{self.chat_model}"

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def complete(self, messages: List[ChatMessage], params: ChatParams) -> Completion:
        body = {
            "model": self.chat_model,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "logprobs": True,
            "top_logprobs": 5,
        }
        try:
            response = self._client.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=self._headers(),
                timeout=params.timeout,
            )
            response.raise_for_status()
            payload = response.json()
        except httpx.HTTPError as exc:
            raise ProviderError(f"chat request failed: {exc}") from exc
        try:
            choice = payload["choices"][0]
            text = choice["message"]["content"] or ""
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed chat response: {payload!r}") from exc
        token_scores = None
        logprobs = (choice.get("logprobs") or {}).get("content") or []
        if logprobs:
            first = logprobs[0]
            alternatives = first.get("top_logprobs") or [first]
            token_scores = tuple(
                (alt["token"], math.exp(alt["logprob"]))
                for alt in alternatives
                if "token" in alt and "logprob" in alt
            )
        return Completion(text=text, token_scores=token_scores)

    def embed_batch(self, texts: List[str]) -> List[List[float]]:
        try:
            response = self._client.post(
                f"{self.base_url}/embeddings",
                json={"model": self.embed_model, "input": texts},
                headers=self._headers(),
                timeout=60.0,
            )
            response.raise_for_status()
            payload = response.json()
        except httpx.HTTPError as exc:
            raise ProviderError(f"embedding request failed: {exc}") from exc
        try:
            data = sorted(payload["data"], key=lambda item: item["index"])
            return [list(item["embedding"]) for item in data]
        except (KeyError, TypeError) as exc:
            raise ProviderError(f"malformed embeddings response: {payload!r}") from exc
