"""Configuration file handling and runtime assembly.

Config is a JSON file (default ./chatiyp.json); relative paths inside it are
resolved against the file's directory. Environment variables override the
HTTP provider settings (IYP_LLM_BASE_URL, IYP_LLM_API_KEY, IYP_CHAT_MODEL,
IYP_EMBED_MODEL).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import llm
from .cypher import RemoteEndpointConfig, execute, execute_remote, parse
from .cypher.executor import RowSet
from .evaluation import EvalConfig
from .graph import PropertyGraph, SchemaCatalog, load_graph, schema_catalog
from .retrieval import PipelineDeps, RetrievalConfig, VectorIndex, build_vector_index


class ConfigError(ValueError):
    pass


@dataclass
class AppConfig:
    raw: dict
    base_dir: str

    def resolve(self, path: str) -> str:
        if os.path.isabs(path):
            return path
        return os.path.normpath(os.path.join(self.base_dir, path))

    def section(self, name: str) -> dict:
        value = self.raw.get(name, {})
        if not isinstance(value, dict):
            raise ConfigError(f"config section {name!r} must be an object")
        return value


def load_config(path: str) -> AppConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid config JSON: {exc}") from exc
    return AppConfig(raw=raw, base_dir=os.path.dirname(os.path.abspath(path)))


def retrieval_config(cfg: AppConfig) -> RetrievalConfig:
    section = cfg.section("retrieval")
    return RetrievalConfig(
        min_rows=section.get("min_rows", 1),
        k=section.get("k", 5),
        rerank_above=section.get("rerank_above", 5),
        top_n=section.get("top_n", 5),
        batch_size=section.get("batch_size", 64),
    )


def eval_config(cfg: AppConfig, metrics: Optional[tuple] = None) -> EvalConfig:
    section = cfg.section("eval")
    cache_dir = section.get("cache_dir")
    if cache_dir:
        cache_dir = cfg.resolve(cache_dir)
    return EvalConfig(
        metrics=metrics or tuple(section.get("metrics", ("bleu", "rouge", "embed", "geval"))),
        max_rows=section.get("max_rows", 50),
        parallelism=section.get("parallelism", 4),
        cache_dir=cache_dir,
    )


def build_provider(cfg: AppConfig):
    section = cfg.section("provider")
    kind = section.get("kind", "http")
    if kind == "scripted":
        script = section.get("script")
        if not script:
            raise ConfigError("scripted provider requires a 'script' file path")
        return llm.ScriptedProvider.from_file(cfg.resolve(script))
    if kind == "http":
        return llm.HttpProvider(
            base_url=section.get("base_url"),
            api_key=section.get("api_key"),
            chat_model=section.get("chat_model"),
            embed_model=section.get("embed_model"),
        )
    raise ConfigError(f"unknown provider kind {kind!r}")


@dataclass
class Runtime:
    graph: Optional[PropertyGraph]
    schema: SchemaCatalog
    executor: Callable[[str], RowSet]
    provider: object
    index: Optional[VectorIndex]
    retrieval: RetrievalConfig
    config: AppConfig

    def deps(self) -> PipelineDeps:
        return PipelineDeps(
            schema=self.schema,
            executor=self.executor,
            provider=self.provider,
            index=self.index,
        )


def build_runtime(cfg: AppConfig, with_index: bool = True) -> Runtime:
    """Assemble graph, executor, provider and vector index from config.

    Remote graph mode uses the HTTP transactional endpoint for execution; a
    local NDJSON dump is still required for the schema catalog and the vector
    index. Without one, both stay empty and vector fallback is unavailable.
    """
    graph_section = cfg.section("graph")
    graph: Optional[PropertyGraph] = None
    if "ndjson" in graph_section:
        path = cfg.resolve(graph_section["ndjson"])
        if not os.path.exists(path):
            raise ConfigError(f"graph dump not found: {path}")
        with open(path, "rb") as fh:
            graph = load_graph(fh)

    if "remote" in graph_section:
        remote = graph_section["remote"]
        endpoint = RemoteEndpointConfig(
            base_url=remote.get("endpoint", ""),
            database=remote.get("database", "neo4j"),
            bearer_token=remote.get("bearer_token"),
            username=remote.get("username"),
            password=remote.get("password"),
            timeout=remote.get("timeout", 10.0),
        )
        if not endpoint.base_url:
            raise ConfigError("remote graph requires an 'endpoint' URL")
        executor = lambda text: execute_remote(text, endpoint)  # noqa: E731
    elif graph is not None:
        local_graph = graph
        executor = lambda text: execute(parse(text), local_graph)  # noqa: E731
    else:
        raise ConfigError("config must define graph.ndjson or graph.remote")

    schema = schema_catalog(graph) if graph is not None else SchemaCatalog((), (), {})
    provider = build_provider(cfg)

    index = None
    if with_index and graph is not None and graph.nodes:
        index_section = cfg.section("index")
        index_path = index_section.get("path")
        if index_path and os.path.exists(cfg.resolve(index_path)):
            index = VectorIndex.load(cfg.resolve(index_path))
        else:
            index = build_vector_index(
                graph,
                provider,
                include_neighbors=index_section.get("include_neighbors", False),
                batch_size=retrieval_config(cfg).batch_size,
            )

    return Runtime(
        graph=graph,
        schema=schema,
        executor=executor,
        provider=provider,
        index=index,
        retrieval=retrieval_config(cfg),
        config=cfg,
    )
