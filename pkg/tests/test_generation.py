import random
import string

import pytest

from chatiyp.generation import Answer, parse_model_output, synthesize
from chatiyp.llm import ScriptedProvider
from chatiyp.retrieval import (
    PipelineStageError,
    RetrievalCandidate,
    RetrievalResult,
)


def make_retrieval(candidates=(), executed=None):
    return RetrievalResult(
        candidates=list(candidates),
        executed_cypher=executed,
        path=["text_to_cypher"],
    )


def candidate(text, source="cypher"):
    return RetrievalCandidate(source=source, text=text, score=1.0, provenance={})


# --- parse_model_output -----------------------------------------------------------


def test_parse_structured_json():
    answer = parse_model_output(
        '{"answer": "52 percent", "cypher": "MATCH (a) RETURN a"}', None
    )
    assert answer.text == "52 percent"
    assert answer.refined_cypher == "MATCH (a) RETURN a"


def test_parse_json_inside_prose():
    completion = 'Sure, here it is:\n{"answer": "yes", "cypher": null}\nHope that helps.'
    answer = parse_model_output(completion, "FALLBACK")
    assert answer.text == "yes"
    assert answer.refined_cypher == "FALLBACK"
    assert answer.raw_completion == completion


def test_parse_prose_only_uses_fallback():
    answer = parse_model_output("The population share is 52%.", "Q")
    assert answer.text == "The population share is 52%."
    assert answer.refined_cypher == "Q"


def test_parse_prose_without_fallback():
    answer = parse_model_output("no structure here", None)
    assert answer.refined_cypher is None


def test_parse_skips_json_without_answer_key():
    completion = '{"note": "ignored"} then {"answer": "found"}'
    assert parse_model_output(completion, None).text == "found"


def test_parse_braces_inside_strings():
    completion = '{"answer": "uses {curly} braces and a \\" quote"}'
    answer = parse_model_output(completion, None)
    assert answer.text == 'uses {curly} braces and a " quote'


def test_parse_truncated_json_falls_back_to_prose():
    completion = '{"answer": "cut off'
    answer = parse_model_output(completion, "Q")
    assert answer.text == completion
    assert answer.refined_cypher == "Q"


def test_parse_is_total_on_random_noise():
    rng = random.Random(42)
    alphabet = string.printable
    for _ in range(200):
        noise = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        answer = parse_model_output(noise, None)
        assert isinstance(answer, Answer)
        assert answer.raw_completion == noise


# --- synthesize -------------------------------------------------------------------


def test_synthesize_numbered_context_in_prompt():
    seen = {}

    class Spy(ScriptedProvider):
        def complete(self, messages, params):
            seen["prompt"] = messages[-1].content
            return super().complete(messages, params)

    provider = Spy([("*", '{"answer": "ok", "cypher": "Q"}')])
    retrieval = make_retrieval(
        [candidate("p.percent=52.0"), candidate("Country | name=Japan", "vector")],
        executed="Q",
    )
    answer = synthesize("question?", retrieval, provider)
    assert "1. [cypher] p.percent=52.0" in seen["prompt"]
    assert "2. [vector] Country | name=Japan" in seen["prompt"]
    assert answer.text == "ok"
    assert answer.refined_cypher == "Q"


def test_synthesize_empty_context_marker():
    seen = {}

    class Spy(ScriptedProvider):
        def complete(self, messages, params):
            seen["prompt"] = messages[-1].content
            return super().complete(messages, params)

    provider = Spy([("*", "I could not find anything.")])
    answer = synthesize("q", make_retrieval(), provider)
    assert "(no context found)" in seen["prompt"]
    assert answer.text == "I could not find anything."
    assert answer.refined_cypher is None


def test_synthesize_deterministic():
    retrieval = make_retrieval([candidate("row")], executed="Q")
    results = [
        synthesize("q", retrieval, ScriptedProvider([("*", '{"answer": "a"}')]))
        for _ in range(3)
    ]
    assert results[0] == results[1] == results[2]


def test_synthesize_provider_failure_names_stage():
    provider = ScriptedProvider([{"match": "*", "response": "", "fail": True}])
    with pytest.raises(PipelineStageError) as excinfo:
        synthesize("q", make_retrieval([candidate("row")]), provider)
    assert excinfo.value.stage == "synthesize"
