"""Retrieval pipeline: text-to-Cypher, vector context fallback, LLM reranking.

The orchestrator runs the Cypher route first; when it fails or returns fewer
than min_rows candidates, vector retrieval over node-description embeddings is
appended; when the combined pool is larger than rerank_above, an LLM relevance
scorer trims it to top_n.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from . import llm
from .cypher import CypherError, parse, validate_read_only
from .cypher.executor import RowSet
from .graph import PropertyGraph, SchemaCatalog, format_value, node_text

STAGE_TEXT_TO_CYPHER = "text_to_cypher"
STAGE_VECTOR_FALLBACK = "vector_fallback"
STAGE_RERANK = "rerank"


class PipelineStageError(RuntimeError):
    """A provider error annotated with the pipeline stage that raised it."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage}: {cause}")


@dataclass(frozen=True)
class RetrievalCandidate:
    source: str  # cypher | vector
    text: str
    score: float
    provenance: dict


@dataclass
class VectorIndex:
    entries: List[Tuple[int, List[float], str]]  # (node id, vector, node text)
    dimension: int

    def save(self, path: str) -> None:
        payload = {
            "dimension": self.dimension,
            "entries": [
                {"node_id": nid, "vector": vec, "text": text}
                for nid, vec, text in self.entries
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path: str) -> "VectorIndex":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        entries = [
            (item["node_id"], list(item["vector"]), item["text"])
            for item in payload["entries"]
        ]
        return cls(entries=entries, dimension=payload["dimension"])


@dataclass(frozen=True)
class RetrievalConfig:
    min_rows: int = 1
    k: int = 5
    rerank_above: int = 5
    top_n: int = 5
    batch_size: int = 64


@dataclass
class RetrievalResult:
    candidates: List[RetrievalCandidate]
    executed_cypher: Optional[str]
    path: List[str]
    diagnostics: List[str] = field(default_factory=list)


@dataclass
class PipelineDeps:
    """Everything retrieve() needs; executor takes query text and returns rows."""

    schema: SchemaCatalog
    executor: Callable[[str], RowSet]
    provider: object
    index: Optional[VectorIndex] = None


_FENCE_RE = re.compile(r"```(?:\w+)?\s*\n?(.*?)```", re.DOTALL)

# Few-shot pairs shown to the translation model; the first mirrors the kind of
# population lookup IYP is typically asked for.
FEW_SHOT_EXAMPLES = (
    (
        "What is the percentage of Japan's population in AS2497?",
        "MATCH (:AS {asn:2497})-[p:POPULATION]-(:Country {country_code:'JP'}) RETURN p.percent",
    ),
    (
        "How many autonomous systems are registered in the graph?",
        "MATCH (a:AS) RETURN count(a)",
    ),
)


def extract_query(completion_text: str) -> str:
    """First fenced code block if present, otherwise the whole completion;
    surrounding whitespace and a trailing semicolon are stripped."""
    match = _FENCE_RE.search(completion_text)
    text = match.group(1) if match else completion_text
    text = text.strip()
    if text.endswith(";"):
        text = text[:-1].rstrip()
    return text


def _examples_text() -> str:
    lines = []
    for question, query in FEW_SHOT_EXAMPLES:
        lines.append(f"Q: {question}\nA: {query}")
    return "\n".join(lines) + "\n\n"


def text_to_cypher(question: str, schema: SchemaCatalog, provider,
                   params: Optional[llm.ChatParams] = None) -> str:
    template = llm.load_template("text_to_cypher")
    messages = llm.render_prompt(
        template,
        {"question": question, "schema": schema.to_text(), "examples": _examples_text()},
    )
    completion = llm.chat(provider, messages, params)
    return extract_query(completion.text)


def row_text(columns: Sequence[str], row: Sequence) -> str:
    return "; ".join(f"{col}={format_value(val)}" for col, val in zip(columns, row))


def cypher_retrieve(question: str, schema: SchemaCatalog,
                    executor: Callable[[str], RowSet], provider):
    """Translate, validate and execute; failures become diagnostics, never errors."""
    diagnostics: List[str] = []
    try:
        query_text = text_to_cypher(question, schema, provider)
    except llm.ProviderError:
        raise
    executed = None
    candidates: List[RetrievalCandidate] = []
    try:
        validate_read_only(query_text)
        parse(query_text)
        rows = executor(query_text)
        executed = query_text
        diagnostics.append(f"cypher returned {len(rows.rows)} rows")
        for i, row in enumerate(rows.rows):
            candidates.append(
                RetrievalCandidate(
                    source="cypher",
                    text=row_text(rows.columns, row),
                    score=1.0,
                    provenance={"query": query_text, "row": i},
                )
            )
    except CypherError as exc:
        diagnostics.append(f"cypher route failed: {exc}")
    return candidates, executed, diagnostics


def build_vector_index(graph: PropertyGraph, provider, include_neighbors: bool = False,
                       batch_size: int = 64) -> VectorIndex:
    """Embed every node's textual description, batched."""
    if not graph.nodes:
        raise ValueError("cannot index an empty graph")
    node_ids = sorted(graph.nodes)
    texts = [node_text(graph, nid, include_neighbors) for nid in node_ids]
    vectors: List[List[float]] = []
    for start in range(0, len(texts), batch_size):
        vectors.extend(llm.embed(provider, texts[start : start + batch_size]))
    entries = list(zip(node_ids, vectors, texts))
    return VectorIndex(entries=entries, dimension=len(vectors[0]))


def _cosine(a: Sequence[float], b: Sequence[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(y * y for y in b))
    if norm_a == 0 or norm_b == 0:
        return 0.0
    return dot / (norm_a * norm_b)


def vector_retrieve(question: str, index: VectorIndex, provider, k: int):
    """Top-k node texts by cosine similarity; ties broken by ascending node id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    (query_vec,) = llm.embed(provider, [question])
    scored = [
        (_cosine(query_vec, vec), nid, text) for nid, vec, text in index.entries
    ]
    scored.sort(key=lambda item: (-item[0], item[1]))
    return [
        RetrievalCandidate(
            source="vector",
            text=text,
            score=score,
            provenance={"node_id": nid, "cosine": score},
        )
        for score, nid, text in scored[:k]
    ]


_INT_RE = re.compile(r"\d+")


def rerank(question: str, candidates: Sequence[RetrievalCandidate], provider, n: int,
           diagnostics: Optional[List[str]] = None) -> List[RetrievalCandidate]:
    """Pointwise 0-10 LLM relevance scoring; returns the top n, a sub-multiset
    of the input. Unparseable judge output scores the candidate 0."""
    if not candidates:
        raise ValueError("candidates must be non-empty")
    if n < 1:
        raise ValueError("n must be >= 1")
    template = llm.load_template("rerank")
    scored = []
    for position, candidate in enumerate(candidates):
        messages = llm.render_prompt(
            template, {"question": question, "context": candidate.text}
        )
        completion = llm.chat(provider, messages)
        match = _INT_RE.search(completion.text)
        if match:
            relevance = min(int(match.group(0)), 10)
        else:
            relevance = 0
            if diagnostics is not None:
                diagnostics.append(
                    f"rerank: unparseable rating {completion.text[:80]!r}, scored 0"
                )
        scored.append((relevance, candidate.score, position, candidate))
    scored.sort(key=lambda item: (-item[0], -item[1], item[2]))
    return [candidate for _, _, _, candidate in scored[:n]]


def retrieve(question: str, deps: PipelineDeps,
             config: Optional[RetrievalConfig] = None) -> RetrievalResult:
    """Run the full retrieval orchestration and record the path taken."""
    config = config or RetrievalConfig()
    path = [STAGE_TEXT_TO_CYPHER]
    try:
        candidates, executed, diagnostics = cypher_retrieve(
            question, deps.schema, deps.executor, deps.provider
        )
    except llm.ProviderError as exc:
        raise PipelineStageError(STAGE_TEXT_TO_CYPHER, exc) from exc

    if len(candidates) < config.min_rows and deps.index is not None:
        path.append(STAGE_VECTOR_FALLBACK)
        try:
            candidates = list(candidates) + vector_retrieve(
                question, deps.index, deps.provider, config.k
            )
        except llm.ProviderError as exc:
            raise PipelineStageError(STAGE_VECTOR_FALLBACK, exc) from exc

    if len(candidates) > config.rerank_above:
        path.append(STAGE_RERANK)
        try:
            candidates = rerank(
                question, candidates, deps.provider, config.top_n, diagnostics
            )
        except llm.ProviderError as exc:
            raise PipelineStageError(STAGE_RERANK, exc) from exc

    return RetrievalResult(
        candidates=list(candidates),
        executed_cypher=executed,
        path=path,
        diagnostics=diagnostics,
    )
