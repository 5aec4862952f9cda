"""Answer-quality metrics: sentence-level BLEU, ROUGE-N/L, embedding-based
token F1, and an LLM judge over factuality / relevance / informativeness.

Variant choices (documented in every report's config snapshot):
- BLEU-4 with add-1 smoothing on numerator and denominator for n >= 2;
  brevity penalty exp(1 - |ref|/|cand|) when the candidate is shorter.
- ROUGE-1/2/L reported as precision/recall/F1.
- Embedding score uses greedy max-cosine matching, no idf weighting,
  cosines clamped to [0, 1].
- Judge ratings on a 1-5 scale, normalized to [0, 1]; when the provider
  exposes token probabilities for the rating digits, the expected rating is
  used instead of the parsed integer.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import List, Optional, Sequence, Tuple

from . import llm

# Numbers keep their decimal point; everything else splits into word tokens
# and single punctuation characters.
_TOKEN_RE = re.compile(r"\d+\.\d+|\w+|[^\w\s]")

JUDGE_CRITERIA = ("factuality", "relevance", "informativeness")


def metric_tokenize(text: str) -> List[str]:
    return _TOKEN_RE.findall(text.lower())


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _clipped_overlap(cand: Counter, ref: Counter) -> int:
    return sum(min(count, ref[gram]) for gram, count in cand.items())


def bleu(candidate: str, reference: str, max_n: int = 4) -> float:
    """Sentence-level BLEU with clipped precisions and smoothing for n >= 2."""
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    cand = metric_tokenize(candidate)
    ref = metric_tokenize(reference)
    if not cand:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand_grams = _ngrams(cand, n)
        ref_grams = _ngrams(ref, n)
        matches = _clipped_overlap(cand_grams, ref_grams)
        total = sum(cand_grams.values())
        if n >= 2:
            matches += 1
            total += 1
        if matches == 0 or total == 0:
            return 0.0
        log_sum += math.log(matches / total)
    precision = math.exp(log_sum / max_n)
    if len(cand) > len(ref):
        brevity = 1.0
    else:
        brevity = math.exp(1.0 - len(ref) / len(cand))
    return brevity * precision


def _prf(overlap: float, cand_total: float, ref_total: float) -> Tuple[float, float, float]:
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def rouge_n(candidate: str, reference: str, n: int) -> Tuple[float, float, float]:
    if n < 1:
        raise ValueError("n must be >= 1")
    cand_grams = _ngrams(metric_tokenize(candidate), n)
    ref_grams = _ngrams(metric_tokenize(reference), n)
    overlap = _clipped_overlap(cand_grams, ref_grams)
    return _prf(overlap, sum(cand_grams.values()), sum(ref_grams.values()))


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Token-level longest common subsequence length (iterative DP)."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, reference: str) -> Tuple[float, float, float]:
    cand = metric_tokenize(candidate)
    ref = metric_tokenize(reference)
    overlap = lcs_length(cand, ref)
    return _prf(overlap, len(cand), len(ref))


def _cosine(a: Sequence[float], b: Sequence[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


def embedding_score(candidate: str, reference: str, provider) -> Tuple[float, float, float]:
    """Greedy max-cosine token matching between candidate and reference."""
    cand_tokens = metric_tokenize(candidate)
    ref_tokens = metric_tokenize(reference)
    if not cand_tokens or not ref_tokens:
        raise ValueError("both texts must tokenize to at least one token")
    cand_vecs = llm.embed(provider, cand_tokens)
    ref_vecs = llm.embed(provider, ref_tokens)

    def best(vec, others) -> float:
        return max(min(max(_cosine(vec, o), 0.0), 1.0) for o in others)

    recall = sum(best(rv, cand_vecs) for rv in ref_vecs) / len(ref_vecs)
    precision = sum(best(cv, ref_vecs) for cv in cand_vecs) / len(cand_vecs)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


_RATING_RE = re.compile(r"\d+")


def _rating_from_completion(completion: llm.Completion) -> Optional[float]:
    if completion.token_scores:
        weighted = [
            (int(token), prob)
            for token, prob in completion.token_scores
            if token in ("1", "2", "3", "4", "5")
        ]
        total = sum(prob for _, prob in weighted)
        if total > 0:
            return sum(rating * prob for rating, prob in weighted) / total
    for match in _RATING_RE.finditer(completion.text):
        value = int(match.group(0))
        if 1 <= value <= 5:
            return float(value)
    return None


def judge_score(question: str, candidate: str, reference: str, provider,
                diagnostics: Optional[List[str]] = None):
    """Rate the candidate per criterion on 1-5, normalize to [0,1], average.

    Returns (geval, per-criterion dict).
    """
    parts = {}
    for criterion in JUDGE_CRITERIA:
        template = llm.load_template(f"judge_{criterion}")
        messages = llm.render_prompt(
            template,
            {"question": question, "candidate": candidate, "reference": reference},
        )
        completion = llm.chat(provider, messages)
        rating = _rating_from_completion(completion)
        if rating is None:
            if diagnostics is not None:
                diagnostics.append(
                    f"judge {criterion}: no parsable rating in {completion.text[:80]!r}"
                )
            parts[criterion] = 0.0
        else:
            parts[criterion] = (rating - 1.0) / 4.0
    geval = sum(parts.values()) / len(parts)
    return geval, parts
