"""Operator CLI: serve the API, ask one-shot questions, build indexes,
validate graph dumps, and run evaluations.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import uuid
from typing import Optional

from .config import ConfigError, build_runtime, eval_config, load_config
from .cypher.errors import CypherError
from .evaluation import DatasetError, evaluate, load_dataset, write_report
from .generation import synthesize
from .graph import GraphLoadError, load_graph
from .llm import ProviderError
from .retrieval import PipelineStageError, build_vector_index, retrieve


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chatiyp")
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the HTTP API")
    serve_p.add_argument("--config", default="./chatiyp.json")

    ask_p = sub.add_parser("ask", help="answer one question and print the response")
    ask_p.add_argument("--config", default="./chatiyp.json")
    ask_p.add_argument("question")

    index_p = sub.add_parser("index", help="build and persist the vector index")
    index_p.add_argument("--config", default="./chatiyp.json")
    index_p.add_argument("--out", required=True)

    eval_p = sub.add_parser("eval", help="run the evaluation harness")
    eval_p.add_argument("--config", default="./chatiyp.json")
    eval_p.add_argument("--dataset", required=True)
    eval_p.add_argument("--out", required=True)
    eval_p.add_argument("--metrics", default=None,
                        help="comma-separated subset of bleu,rouge,embed,geval")

    validate_p = sub.add_parser("validate-graph", help="check an NDJSON dump")
    validate_p.add_argument("--in", dest="input", required=True)

    return parser


def _dump(obj, pretty: bool) -> str:
    if pretty:
        return json.dumps(obj, indent=2, sort_keys=True)
    return json.dumps(obj, sort_keys=True)


def _cmd_ask(args) -> int:
    runtime = build_runtime(load_config(args.config))
    retrieval = retrieve(args.question, runtime.deps(), runtime.retrieval)
    answer = synthesize(args.question, retrieval, runtime.provider)
    response = {
        "answer": answer.text,
        "cypher": answer.refined_cypher,
        "context": [
            {"source": c.source, "text": c.text, "score": c.score}
            for c in retrieval.candidates
        ],
        "path": retrieval.path,
        "timings": {},
        "request_id": str(uuid.uuid4()),
    }
    print(json.dumps(response, indent=2, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    cfg = load_config(args.config)
    runtime = build_runtime(cfg)
    server = cfg.section("server")
    serve(
        runtime,
        host=server.get("host", "127.0.0.1"),
        port=server.get("port", 8000),
        cors_origins=tuple(server.get("cors_origins", ["*"])),
    )
    return 0


def _cmd_index(args) -> int:
    cfg = load_config(args.config)
    runtime = build_runtime(cfg, with_index=False)
    if runtime.graph is None or not runtime.graph.nodes:
        print("cannot index: no local graph configured", file=sys.stderr)
        return 1
    index_section = cfg.section("index")
    index = build_vector_index(
        runtime.graph,
        runtime.provider,
        include_neighbors=index_section.get("include_neighbors", False),
        batch_size=runtime.retrieval.batch_size,
    )
    index.save(args.out)
    print(_dump({"entries": len(index.entries), "dimension": index.dimension}, args.pretty))
    return 0


def _cmd_eval(args) -> int:
    cfg = load_config(args.config)
    runtime = build_runtime(cfg)
    dataset = load_dataset(args.dataset)
    metrics = tuple(args.metrics.split(",")) if args.metrics else None
    config = eval_config(cfg, metrics=metrics)

    def ask(question: str) -> str:
        retrieval = retrieve(question, runtime.deps(), runtime.retrieval)
        return synthesize(question, retrieval, runtime.provider).text

    report = evaluate(dataset, ask, runtime.executor, runtime.provider, config)
    write_report(report, args.out)
    summary = {
        "records": len(report.per_record),
        "unevaluable": len(report.unevaluable),
        "groups": {
            f"{difficulty}/{domain}": {
                metric: round(stats.mean, 4) for metric, stats in sorted(group.items())
            }
            for (difficulty, domain), group in sorted(report.groups.items())
        },
        "report": args.out,
    }
    print(_dump(summary, args.pretty))
    return 0


def _cmd_validate_graph(args) -> int:
    with open(args.input, "rb") as fh:
        graph = load_graph(fh)
    print(_dump({"nodes": len(graph.nodes), "edges": len(graph.edges)}, args.pretty))
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "ask": _cmd_ask,
    "index": _cmd_index,
    "eval": _cmd_eval,
    "validate-graph": _cmd_validate_graph,
}


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, DatasetError, GraphLoadError, CypherError,
            ProviderError, PipelineStageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
