import itertools
import math
import random

import pytest

from chatiyp.llm import ScriptedProvider
from chatiyp.metrics import (
    JUDGE_CRITERIA,
    bleu,
    embedding_score,
    judge_score,
    lcs_length,
    metric_tokenize,
    rouge_l,
    rouge_n,
)

TOL = 1e-9


# --- tokenizer --------------------------------------------------------------------


def test_tokenize_lowercases_and_splits_punctuation():
    assert metric_tokenize("The AS, 2497!") == ["the", "as", ",", "2497", "!"]


def test_tokenize_keeps_decimal_numbers_whole():
    assert metric_tokenize("52.0 percent") == ["52.0", "percent"]


def test_tokenize_empty():
    assert metric_tokenize("") == []


# --- BLEU -------------------------------------------------------------------------


def test_bleu1_hand_derived():
    # unigram clipped precision: "the" and "cat" each clip to 1 -> 2/4,
    # candidate longer than reference so no brevity penalty.
    assert abs(bleu("the cat the cat", "the cat sat", max_n=1) - 0.5) < TOL


def test_bleu_identity():
    text = "AS2497 serves 52.0 percent of Japan"
    assert abs(bleu(text, text) - 1.0) < TOL


def test_bleu_empty_candidate():
    assert bleu("", "reference text") == 0.0


def test_bleu_no_overlap():
    assert bleu("alpha beta", "gamma delta") == 0.0


def test_bleu_smoothing_keeps_partial_overlap_positive():
    # shares unigrams but no higher-order n-grams; smoothing for n >= 2 keeps
    # the geometric mean positive.
    score = bleu("cat the sat dog", "the cat sat on the mat")
    assert 0.0 < score < 1.0


def test_bleu_brevity_penalty():
    # candidate is a strict prefix of the reference: every precision is 1
    # (after smoothing 2/2 for bigrams) so only brevity pulls it below 1.
    score = bleu("a b c", "a b c d e f")
    assert score < math.exp(1.0 - 6.0 / 3.0) + TOL
    assert score > 0.0


def test_bleu_bounds_randomized():
    rng = random.Random(3)
    words = ["as", "prefix", "country", "52.0", "japan", "of"]
    for _ in range(100):
        cand = " ".join(rng.choices(words, k=rng.randint(1, 10)))
        ref = " ".join(rng.choices(words, k=rng.randint(1, 10)))
        assert 0.0 <= bleu(cand, ref) <= 1.0 + TOL


# --- ROUGE ------------------------------------------------------------------------


def test_rouge2_hand_derived():
    p, r, f1 = rouge_n("a b c", "a b d", 2)
    assert abs(p - 0.5) < TOL
    assert abs(r - 0.5) < TOL
    assert abs(f1 - 0.5) < TOL


def test_rouge1_clipping():
    # "a" appears twice in the candidate but once in the reference
    p, r, f1 = rouge_n("a a b", "a c", 1)
    assert abs(p - 1.0 / 3.0) < TOL
    assert abs(r - 0.5) < TOL


def test_rouge_identity():
    for n in (1, 2):
        assert rouge_n("x y z", "x y z", n) == (1.0, 1.0, 1.0)
    assert rouge_l("x y z", "x y z") == (1.0, 1.0, 1.0)


def test_rouge_f1_symmetric():
    rng = random.Random(9)
    words = list("abcdef")
    for _ in range(50):
        a = " ".join(rng.choices(words, k=rng.randint(1, 8)))
        b = " ".join(rng.choices(words, k=rng.randint(1, 8)))
        assert abs(rouge_n(a, b, 1)[2] - rouge_n(b, a, 1)[2]) < TOL
        assert abs(rouge_l(a, b)[2] - rouge_l(b, a)[2]) < TOL


def test_rouge_empty_candidate():
    assert rouge_n("", "a b", 1) == (0.0, 0.0, 0.0)
    assert rouge_l("", "a b") == (0.0, 0.0, 0.0)


def test_rouge_l_hand_derived():
    p, r, f1 = rouge_l("a b c d", "a c d")
    assert abs(p - 3.0 / 4.0) < TOL
    assert abs(r - 1.0) < TOL
    assert abs(f1 - 6.0 / 7.0) < TOL


def brute_force_lcs(a, b):
    best = 0
    for size in range(len(a), 0, -1):
        for combo in itertools.combinations(a, size):
            it = iter(b)
            if all(x in it for x in combo):
                return size
    return best


def test_lcs_matches_brute_force():
    rng = random.Random(17)
    alphabet = list("abc")
    for _ in range(200):
        a = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        b = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        assert lcs_length(a, b) == brute_force_lcs(a, b)


# --- embedding score -------------------------------------------------------------


def test_embedding_score_hand_derived():
    provider = ScriptedProvider(
        embeddings={"x": [1.0, 0.0], "y": [0.0, 1.0]}
    )
    p, r, f1 = embedding_score("x", "x y", provider)
    assert abs(p - 1.0) < TOL
    assert abs(r - 0.5) < TOL
    assert abs(f1 - 2.0 / 3.0) < TOL


def test_embedding_score_identity():
    provider = ScriptedProvider(seed=5, dim=8)
    p, r, f1 = embedding_score("alpha beta gamma", "alpha beta gamma", provider)
    assert abs(f1 - 1.0) < TOL


def test_embedding_score_clamped_to_unit_interval():
    provider = ScriptedProvider(embeddings={"x": [1.0, 0.0], "y": [-1.0, 0.0]})
    p, r, f1 = embedding_score("x", "y", provider)
    assert p == 0.0 and r == 0.0 and f1 == 0.0


def test_embedding_score_rejects_empty():
    with pytest.raises(ValueError):
        embedding_score("", "ref", ScriptedProvider())


# --- judge ------------------------------------------------------------------------


def judge_provider(ratings):
    entries = []
    for criterion, rating in zip(JUDGE_CRITERIA, ratings):
        entries.append((f"Criterion: {criterion}.", f"Rating: {rating}"))
    return ScriptedProvider(entries)


def test_judge_hand_derived():
    geval, parts = judge_score("q", "cand", "ref", judge_provider([1, 3, 5]))
    assert abs(parts["factuality"] - 0.0) < TOL
    assert abs(parts["relevance"] - 0.5) < TOL
    assert abs(parts["informativeness"] - 1.0) < TOL
    assert abs(geval - 0.5) < TOL


def test_judge_all_fives():
    geval, _ = judge_score("q", "cand", "ref", judge_provider([5, 5, 5]))
    assert abs(geval - 1.0) < TOL


def test_judge_monotone_in_ratings():
    scores = []
    for rating in (1, 2, 3, 4, 5):
        geval, _ = judge_score("q", "c", "r", judge_provider([rating] * 3))
        scores.append(geval)
    assert scores == sorted(scores)
    assert len(set(scores)) == 5


def test_judge_token_scores_expectation():
    entries = [
        {
            "match": f"Criterion: {criterion}.",
            "response": "4",
            "token_scores": {"4": 0.5, "5": 0.5},
        }
        for criterion in JUDGE_CRITERIA
    ]
    geval, parts = judge_score("q", "c", "r", ScriptedProvider(entries))
    assert abs(geval - 0.875) < TOL


def test_judge_unparseable_rating_scores_zero():
    entries = [
        ("Criterion: factuality.", "Rating: 5"),
        ("Criterion: relevance.", "I decline to answer."),
        ("Criterion: informativeness.", "Rating: 5"),
    ]
    diagnostics = []
    geval, parts = judge_score(
        "q", "c", "r", ScriptedProvider(entries), diagnostics=diagnostics
    )
    assert parts["relevance"] == 0.0
    assert abs(geval - 2.0 / 3.0) < TOL
    assert any("relevance" in d for d in diagnostics)


def test_judge_ignores_out_of_range_integers():
    entries = [
        (f"Criterion: {criterion}.", "On a scale of 1 to 5 I say 0 no wait 3")
        for criterion in JUDGE_CRITERIA
    ]
    geval, _ = judge_score("q", "c", "r", ScriptedProvider(entries))
    # "1" is the first in-range integer found in the reply
    assert abs(geval - 0.0) < TOL
