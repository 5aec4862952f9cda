"""Answer synthesis: question + selected context -> natural-language answer
plus a refined Cypher query for transparency."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import llm
from .retrieval import PipelineStageError, RetrievalResult

STAGE_SYNTHESIZE = "synthesize"


@dataclass(frozen=True)
class Answer:
    text: str
    refined_cypher: Optional[str]
    raw_completion: str


def _find_json_object(text: str) -> Optional[dict]:
    """Brace-matched scan for the first JSON object carrying an "answer" key."""
    start = text.find("{")
    while start != -1:
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
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    try:
                        obj = json.loads(text[start : i + 1])
                    except json.JSONDecodeError:
                        break
                    if isinstance(obj, dict) and "answer" in obj:
                        return obj
                    break
        start = text.find("{", start + 1)
    return None


def parse_model_output(completion_text: str, fallback_cypher: Optional[str]) -> Answer:
    """Total parser: structured JSON if present, otherwise prose + fallback query."""
    obj = _find_json_object(completion_text)
    if obj is not None:
        answer = obj.get("answer")
        cypher = obj.get("cypher")
        return Answer(
            text=str(answer) if answer is not None else "",
            refined_cypher=str(cypher) if cypher else (fallback_cypher or None),
            raw_completion=completion_text,
        )
    return Answer(
        text=completion_text,
        refined_cypher=fallback_cypher or None,
        raw_completion=completion_text,
    )


def synthesize(question: str, retrieval: RetrievalResult, provider,
               params: Optional[llm.ChatParams] = None) -> Answer:
    """Render the synthesis prompt over the retrieved context and parse the reply."""
    if retrieval.candidates:
        context = "\n".join(
            f"{i + 1}. [{c.source}] {c.text}" for i, c in enumerate(retrieval.candidates)
        )
    else:
        context = "(no context found)"
    template = llm.load_template("synthesize")
    messages = llm.render_prompt(
        template,
        {
            "question": question,
            "context": context,
            "executed_cypher": retrieval.executed_cypher or "(none)",
        },
    )
    try:
        completion = llm.chat(provider, messages, params)
    except llm.ProviderError as exc:
        raise PipelineStageError(STAGE_SYNTHESIZE, exc) from exc
    return parse_model_output(completion.text, retrieval.executed_cypher)
