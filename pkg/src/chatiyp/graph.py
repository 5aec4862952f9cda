"""Immutable in-memory property graph with NDJSON loader, schema catalog and
node textualization.

The dump format is one JSON object per line:

    {"kind":"node","id":0,"labels":["AS"],"props":{"asn":2497}}
    {"kind":"edge","id":0,"type":"POPULATION","from":0,"to":1,"props":{"percent":52.0}}

Loading is two-pass, so nodes and edges may appear in any order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Union

# A property value is a string, int, float, bool or None. Comparisons between
# incompatible kinds are "incomparable" (None), never an error.
PropertyValue = Union[str, int, float, bool, None]


class GraphLoadError(ValueError):
    """Raised when an NDJSON dump cannot be loaded. Carries the line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Node:
    id: int
    labels: frozenset
    properties: dict

    def __post_init__(self):
        if not self.labels:
            raise GraphLoadError(f"node {self.id} has no labels")


@dataclass(frozen=True)
class Edge:
    id: int
    type: str
    src: int
    dst: int
    properties: dict

    def other(self, node_id: int) -> int:
        return self.dst if node_id == self.src else self.src


@dataclass(frozen=True)
class PropertyGraph:
    nodes: dict  # id -> Node
    edges: dict  # id -> Edge
    adjacency: dict  # node id -> tuple of incident edge ids (both directions)

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def edge(self, edge_id: int) -> Edge:
        return self.edges[edge_id]

    def incident_edges(self, node_id: int) -> Iterable[Edge]:
        return (self.edges[eid] for eid in self.adjacency[node_id])


@dataclass(frozen=True)
class SchemaCatalog:
    labels: tuple
    relationship_types: tuple
    property_keys: dict  # label or relationship type -> sorted tuple of keys

    def to_text(self) -> str:
        """Serialize for inclusion in prompts."""
        lines = []
        for label in self.labels:
            keys = ", ".join(self.property_keys.get(label, ()))
            lines.append(f"node label {label} ({keys})")
        for rtype in self.relationship_types:
            keys = ", ".join(self.property_keys.get(rtype, ()))
            lines.append(f"relationship {rtype} ({keys})")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "relationship_types": list(self.relationship_types),
            "property_keys": {k: list(v) for k, v in self.property_keys.items()},
        }


_ALLOWED_PROP_TYPES = (str, int, float, bool, type(None))


def _check_props(props, line: int) -> dict:
    if not isinstance(props, dict):
        raise GraphLoadError("props must be an object", line)
    for key, value in props.items():
        if not isinstance(value, _ALLOWED_PROP_TYPES):
            raise GraphLoadError(
                f"property {key!r} has unsupported type {type(value).__name__}", line
            )
    return dict(props)


def _iter_lines(source) -> Iterable[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        return source.splitlines()
    # file-like: text or binary
    return (
        line.decode("utf-8") if isinstance(line, bytes) else line for line in source
    )


def load_graph(source: Union[str, bytes, IO]) -> PropertyGraph:
    """Load a property graph from an NDJSON dump (string, bytes or file-like).

    Two-pass: all nodes are registered before edge endpoints are checked.
    Raises GraphLoadError with the offending line number on malformed input,
    duplicate ids, or edges referencing unknown nodes.
    """
    nodes: dict = {}
    pending_edges = []  # (line number, raw object)

    for lineno, raw in enumerate(_iter_lines(source), start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphLoadError(f"malformed JSON ({exc.msg})", lineno) from exc
        if not isinstance(obj, dict) or "kind" not in obj:
            raise GraphLoadError("expected an object with a 'kind' field", lineno)
        kind = obj["kind"]
        if kind == "node":
            node = _parse_node(obj, lineno)
            if node.id in nodes:
                raise GraphLoadError(f"duplicate node id {node.id}", lineno)
            nodes[node.id] = node
        elif kind == "edge":
            pending_edges.append((lineno, obj))
        else:
            raise GraphLoadError(f"unknown kind {kind!r}", lineno)

    edges: dict = {}
    adjacency = {node_id: [] for node_id in nodes}
    for lineno, obj in pending_edges:
        edge = _parse_edge(obj, lineno)
        if edge.id in edges:
            raise GraphLoadError(f"duplicate edge id {edge.id}", lineno)
        for endpoint in (edge.src, edge.dst):
            if endpoint not in nodes:
                raise GraphLoadError(
                    f"edge {edge.id} references unknown node id {endpoint}", lineno
                )
        edges[edge.id] = edge
        adjacency[edge.src].append(edge.id)
        if edge.dst != edge.src:
            adjacency[edge.dst].append(edge.id)

    adjacency = {nid: tuple(sorted(eids)) for nid, eids in adjacency.items()}
    return PropertyGraph(nodes=nodes, edges=edges, adjacency=adjacency)


def _require_id(obj, lineno) -> int:
    value = obj.get("id")
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise GraphLoadError("id must be a non-negative integer", lineno)
    return value


def _parse_node(obj, lineno) -> Node:
    node_id = _require_id(obj, lineno)
    labels = obj.get("labels")
    if not isinstance(labels, list) or not labels:
        raise GraphLoadError(f"node {node_id} must have a non-empty labels list", lineno)
    props = _check_props(obj.get("props", {}), lineno)
    return Node(id=node_id, labels=frozenset(labels), properties=props)


def _parse_edge(obj, lineno) -> Edge:
    edge_id = _require_id(obj, lineno)
    etype = obj.get("type")
    if not isinstance(etype, str) or not etype:
        raise GraphLoadError(f"edge {edge_id} must have a type", lineno)
    for endpoint in ("from", "to"):
        if not isinstance(obj.get(endpoint), int) or isinstance(obj.get(endpoint), bool):
            raise GraphLoadError(f"edge {edge_id} missing integer {endpoint!r}", lineno)
    props = _check_props(obj.get("props", {}), lineno)
    return Edge(id=edge_id, type=etype, src=obj["from"], dst=obj["to"], properties=props)


def schema_catalog(graph: PropertyGraph) -> SchemaCatalog:
    """Enumerate labels, relationship types and observed property keys.

    Output is fully sorted so that catalog serialization is deterministic.
    """
    labels = set()
    rtypes = set()
    keys: dict = {}
    for node in graph.nodes.values():
        for label in node.labels:
            labels.add(label)
            keys.setdefault(label, set()).update(node.properties)
    for edge in graph.edges.values():
        rtypes.add(edge.type)
        keys.setdefault(edge.type, set()).update(edge.properties)
    return SchemaCatalog(
        labels=tuple(sorted(labels)),
        relationship_types=tuple(sorted(rtypes)),
        property_keys={name: tuple(sorted(ks)) for name, ks in sorted(keys.items())},
    )


def format_value(value: PropertyValue) -> str:
    """Render a property value for textual contexts (node texts, row texts)."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def node_text(graph: PropertyGraph, node_id: int, include_neighbors: bool = False) -> str:
    """Deterministic textual description of a node, used for embeddings.

    Template: "<labels> | k1=v1; k2=v2" with labels and keys sorted; with
    include_neighbors, one " | rel: TYPE-><labels>" suffix per incident edge,
    in edge id order.
    """
    if node_id not in graph.nodes:
        raise KeyError(f"unknown node id {node_id}")
    node = graph.nodes[node_id]
    labels = ",".join(sorted(node.labels))
    props = "; ".join(
        f"{key}={format_value(node.properties[key])}" for key in sorted(node.properties)
    )
    text = f"{labels} | {props}"
    if include_neighbors:
        for edge in graph.incident_edges(node_id):
            other = graph.nodes[edge.other(node_id)]
            text += f" | rel: {edge.type}->{','.join(sorted(other.labels))}"
    return text


def content_hash(graph: PropertyGraph) -> str:
    """SHA-256 over a canonical serialization; used to assert immutability."""
    payload = {
        "nodes": [
            {
                "id": node.id,
                "labels": sorted(node.labels),
                "props": {k: node.properties[k] for k in sorted(node.properties)},
            }
            for node in sorted(graph.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [
            {
                "id": edge.id,
                "type": edge.type,
                "from": edge.src,
                "to": edge.dst,
                "props": {k: edge.properties[k] for k in sorted(edge.properties)},
            }
            for edge in sorted(graph.edges.values(), key=lambda e: e.id)
        ],
        "adjacency": {str(nid): list(graph.adjacency[nid]) for nid in sorted(graph.adjacency)},
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def compare_values(a: PropertyValue, b: PropertyValue) -> Optional[int]:
    """Three-way comparison; returns None when the values are incomparable.

    Ints and floats compare numerically. Booleans only compare with booleans,
    null with nothing (including null).
    """
    if a is None or b is None:
        return None
    a_bool, b_bool = isinstance(a, bool), isinstance(b, bool)
    if a_bool or b_bool:
        if a_bool and b_bool:
            return (a > b) - (a < b)
        return None
    a_num = isinstance(a, (int, float))
    b_num = isinstance(b, (int, float))
    if a_num and b_num:
        return (a > b) - (a < b)
    if isinstance(a, str) and isinstance(b, str):
        return (a > b) - (a < b)
    return None


def sort_key(value: PropertyValue):
    """Total order over property values, used for deterministic row ordering."""
    if value is None:
        return (0, 0)
    if isinstance(value, bool):
        return (1, value)
    if isinstance(value, (int, float)):
        return (2, float(value))
    return (3, value)
