"""Benchmark harness: dataset loading, reference-answer pipeline, per-record
scoring with the four metrics, and difficulty x domain aggregation."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import metrics
from .cypher import ReadOnlyViolation, validate_read_only
from .cypher.errors import CypherError
from .cypher.executor import RowSet
from .graph import format_value
from .llm import ProviderError, chat, load_template, render_prompt
from .retrieval import PipelineStageError

DIFFICULTIES = ("easy", "medium", "hard")
DOMAINS = ("general", "technical")
ALL_METRIC_GROUPS = ("bleu", "rouge", "embed", "geval")


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class EvalRecord:
    id: str
    question: str
    gold_cypher: str
    difficulty: str
    domain: str


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    count: int

    def to_dict(self) -> dict:
        return {
            "min": self.min,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.max,
            "mean": self.mean,
            "count": self.count,
        }


@dataclass
class RecordResult:
    record: EvalRecord
    system_answer: str
    reference: str
    scores: Dict[str, float]
    diagnostics: List[str] = field(default_factory=list)


@dataclass
class MetricReport:
    per_record: Dict[str, RecordResult]
    unevaluable: Dict[str, str]  # record id -> reason
    groups: Dict[Tuple[str, str], Dict[str, BoxStats]]
    config: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "per_record": {
                rid: {
                    "question": res.record.question,
                    "difficulty": res.record.difficulty,
                    "domain": res.record.domain,
                    "system_answer": res.system_answer,
                    "reference": res.reference,
                    "scores": {k: res.scores[k] for k in sorted(res.scores)},
                    "diagnostics": res.diagnostics,
                }
                for rid, res in sorted(self.per_record.items())
            },
            "unevaluable": dict(sorted(self.unevaluable.items())),
            "groups": {
                f"{difficulty}/{domain}": {
                    metric: stats.to_dict() for metric, stats in sorted(group.items())
                }
                for (difficulty, domain), group in sorted(self.groups.items())
            },
        }


@dataclass(frozen=True)
class EvalConfig:
    metrics: Tuple[str, ...] = ALL_METRIC_GROUPS
    max_rows: int = 50
    parallelism: int = 4
    cache_dir: Optional[str] = None


def load_dataset(path: str) -> List[EvalRecord]:
    """Load and validate a JSONL benchmark file."""
    records: List[EvalRecord] = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"line {lineno}: malformed JSON ({exc.msg})") from exc
            for key in ("id", "question", "gold_cypher", "difficulty", "domain"):
                if key not in obj or not isinstance(obj[key], str) or not obj[key]:
                    raise DatasetError(f"line {lineno}: missing or invalid field {key!r}")
            if obj["id"] in seen:
                raise DatasetError(f"line {lineno}: duplicate id {obj['id']!r}")
            if obj["difficulty"] not in DIFFICULTIES:
                raise DatasetError(
                    f"line {lineno}: unknown difficulty {obj['difficulty']!r}"
                )
            if obj["domain"] not in DOMAINS:
                raise DatasetError(f"line {lineno}: unknown domain {obj['domain']!r}")
            try:
                validate_read_only(obj["gold_cypher"])
            except CypherError as exc:
                raise DatasetError(f"line {lineno}: gold query rejected: {exc}") from exc
            seen.add(obj["id"])
            records.append(
                EvalRecord(
                    id=obj["id"],
                    question=obj["question"],
                    gold_cypher=obj["gold_cypher"],
                    difficulty=obj["difficulty"],
                    domain=obj["domain"],
                )
            )
    return records


def serialize_rows(rows: RowSet, max_rows: int = 50) -> str:
    if not rows.rows:
        return f"columns: {', '.join(rows.columns)}\n(empty result)"
    lines = ["columns: " + ", ".join(rows.columns)]
    for row in rows.rows[:max_rows]:
        lines.append("; ".join(f"{c}={format_value(v)}" for c, v in zip(rows.columns, row)))
    return "\n".join(lines)


class ReferenceCache:
    """Directory of JSON files keyed by (record id, gold hash, provider id).

    Safe for concurrent readers; writes go through a per-process lock.
    """

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, record: EvalRecord, provider_id: str) -> str:
        gold_hash = hashlib.sha256(record.gold_cypher.encode("utf-8")).hexdigest()
        key = hashlib.sha256(
            f"{record.id}|{gold_hash}|{provider_id}".encode("utf-8")
        ).hexdigest()
        return os.path.join(self.directory, f"{key}.json")

    def get(self, record: EvalRecord, provider_id: str) -> Optional[str]:
        path = self._path(record, provider_id)
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)["reference"]

    def put(self, record: EvalRecord, provider_id: str, reference: str) -> None:
        path = self._path(record, provider_id)
        with self._lock:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump({"reference": reference}, fh)


class UnevaluableRecord(Exception):
    pass


def reference_answer(record: EvalRecord, executor: Callable[[str], RowSet], provider,
                     max_rows: int = 50, cache: Optional[ReferenceCache] = None) -> str:
    """Execute the gold query and prompt for a reference answer."""
    provider_id = getattr(provider, "provider_id", "unknown")
    if cache is not None:
        cached = cache.get(record, provider_id)
        if cached is not None:
            return cached
    try:
        rows = executor(record.gold_cypher)
    except CypherError as exc:
        raise UnevaluableRecord(f"gold query failed: {exc}") from exc
    template = load_template("reference_answer")
    messages = render_prompt(
        template, {"question": record.question, "rows": serialize_rows(rows, max_rows)}
    )
    reference = chat(provider, messages).text
    if cache is not None:
        cache.put(record, provider_id, reference)
    return reference


def score_record(record: EvalRecord, system_answer: str, reference: str, provider,
                 enabled: Sequence[str], diagnostics: Optional[List[str]] = None
                 ) -> Dict[str, float]:
    scores: Dict[str, float] = {}
    if "bleu" in enabled:
        scores["bleu"] = metrics.bleu(system_answer, reference)
    if "rouge" in enabled:
        _, _, scores["rouge1_f1"] = metrics.rouge_n(system_answer, reference, 1)
        _, _, scores["rouge2_f1"] = metrics.rouge_n(system_answer, reference, 2)
        _, _, scores["rougeL_f1"] = metrics.rouge_l(system_answer, reference)
    if "embed" in enabled:
        p, r, f1 = metrics.embedding_score(system_answer, reference, provider)
        scores["embed_p"], scores["embed_r"], scores["embed_f1"] = p, r, f1
    if "geval" in enabled:
        geval, parts = metrics.judge_score(
            record.question, system_answer, reference, provider, diagnostics
        )
        scores["geval"] = geval
        for criterion, value in parts.items():
            scores[f"geval_{criterion}"] = value
    return scores


def box_stats(values: Sequence[float]) -> BoxStats:
    """Five-number summary plus mean; quartiles by linear interpolation at
    position (n - 1) * p over the sorted values."""
    if not values:
        raise ValueError("cannot summarize an empty sequence")
    ordered = sorted(values)
    n = len(ordered)

    def quantile(p: float) -> float:
        pos = (n - 1) * p
        lo = int(pos)
        hi = min(lo + 1, n - 1)
        frac = pos - lo
        return ordered[lo] * (1 - frac) + ordered[hi] * frac

    return BoxStats(
        min=ordered[0],
        q1=quantile(0.25),
        median=quantile(0.5),
        q3=quantile(0.75),
        max=ordered[-1],
        mean=sum(ordered) / n,
        count=n,
    )


def aggregate(per_record: Dict[str, RecordResult]) -> Dict[Tuple[str, str], Dict[str, BoxStats]]:
    """Group scores by (difficulty, domain) and summarize each metric."""
    buckets: Dict[Tuple[str, str], Dict[str, List[float]]] = {}
    for result in per_record.values():
        key = (result.record.difficulty, result.record.domain)
        bucket = buckets.setdefault(key, {})
        for metric, value in result.scores.items():
            bucket.setdefault(metric, []).append(value)
    return {
        key: {metric: box_stats(values) for metric, values in bucket.items()}
        for key, bucket in buckets.items()
    }


def evaluate(dataset: Sequence[EvalRecord], ask: Callable[[str], str],
             executor: Callable[[str], RowSet], provider,
             config: Optional[EvalConfig] = None) -> MetricReport:
    """Score every record: reference from the gold query, system answer from
    the ask pipeline, then all enabled metrics. Per-record failures mark the
    record unevaluable instead of aborting the run."""
    if not dataset:
        raise DatasetError("dataset is empty")
    config = config or EvalConfig()
    cache = ReferenceCache(config.cache_dir) if config.cache_dir else None

    def run_one(record: EvalRecord):
        diagnostics: List[str] = []
        reference = reference_answer(
            record, executor, provider, config.max_rows, cache
        )
        system_answer = ask(record.question)
        scores = score_record(
            record, system_answer, reference, provider, config.metrics, diagnostics
        )
        return RecordResult(
            record=record,
            system_answer=system_answer,
            reference=reference,
            scores=scores,
            diagnostics=diagnostics,
        )

    per_record: Dict[str, RecordResult] = {}
    unevaluable: Dict[str, str] = {}
    ordered = sorted(dataset, key=lambda r: r.id)
    with ThreadPoolExecutor(max_workers=max(1, config.parallelism)) as pool:
        futures = {record.id: pool.submit(run_one, record) for record in ordered}
    for record in ordered:
        try:
            per_record[record.id] = futures[record.id].result()
        except (UnevaluableRecord, ProviderError, PipelineStageError) as exc:
            unevaluable[record.id] = str(exc)

    groups = aggregate(per_record)
    snapshot = {
        "metrics": list(config.metrics),
        "max_rows": config.max_rows,
        "parallelism": config.parallelism,
        "bleu": "sentence-level BLEU-4, add-1 smoothing for n>=2",
        "rouge": "ROUGE-1/2/L F1",
        "embed": "greedy max-cosine token matching, cosines clamped to [0,1]",
        "geval": "1-5 judge over factuality/relevance/informativeness, "
                 "probability-weighted when token scores are available",
        "quartiles": "linear interpolation at (n-1)*p",
    }
    return MetricReport(
        per_record=per_record, unevaluable=unevaluable, groups=groups, config=snapshot
    )


def write_report(report: MetricReport, json_path: str) -> None:
    """Write the report JSON plus a CSV of group statistics alongside it."""
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    csv_path = os.path.splitext(json_path)[0] + ".csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["difficulty", "domain", "metric", "min", "q1", "median", "q3", "max", "mean", "count"]
        )
        for (difficulty, domain), group in sorted(report.groups.items()):
            for metric, stats in sorted(group.items()):
                writer.writerow(
                    [
                        difficulty,
                        domain,
                        metric,
                        stats.min,
                        stats.q1,
                        stats.median,
                        stats.q3,
                        stats.max,
                        stats.mean,
                        stats.count,
                    ]
                )
