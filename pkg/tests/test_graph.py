import io
import json

import pytest

from chatiyp.graph import (
    GraphLoadError,
    compare_values,
    content_hash,
    load_graph,
    node_text,
    schema_catalog,
)


def test_empty_stream():
    graph = load_graph("")
    assert not graph.nodes and not graph.edges


def test_fixture_shape(fixture_graph):
    assert len(fixture_graph.nodes) == 7
    assert len(fixture_graph.edges) == 6
    as_node = fixture_graph.nodes[0]
    assert as_node.labels == frozenset({"AS"})
    assert as_node.properties["asn"] == 2497


def test_minimal_dump():
    dump = "\n".join(
        [
            json.dumps({"kind": "node", "id": 0, "labels": ["AS"], "props": {"asn": 2497}}),
            json.dumps(
                {"kind": "node", "id": 1, "labels": ["Country"], "props": {"country_code": "JP"}}
            ),
            json.dumps(
                {"kind": "edge", "id": 0, "type": "POPULATION", "from": 0, "to": 1,
                 "props": {"percent": 52.0}}
            ),
        ]
    )
    graph = load_graph(dump)
    assert len(graph.nodes) == 2
    assert len(graph.edges) == 1
    assert graph.adjacency == {0: (0,), 1: (0,)}


def test_edges_may_precede_nodes():
    dump = "\n".join(
        [
            json.dumps({"kind": "edge", "id": 0, "type": "T", "from": 0, "to": 1}),
            json.dumps({"kind": "node", "id": 0, "labels": ["A"]}),
            json.dumps({"kind": "node", "id": 1, "labels": ["B"]}),
        ]
    )
    graph = load_graph(dump)
    assert len(graph.edges) == 1


def test_unknown_endpoint_reports_line():
    dump = "\n".join(
        [
            json.dumps({"kind": "node", "id": 0, "labels": ["A"]}),
            json.dumps({"kind": "edge", "id": 0, "type": "T", "from": 0, "to": 9}),
        ]
    )
    with pytest.raises(GraphLoadError, match="line 2"):
        load_graph(dump)


def test_malformed_json_reports_line():
    with pytest.raises(GraphLoadError, match="line 2"):
        load_graph('{"kind":"node","id":0,"labels":["A"]}\n{oops\n')


@pytest.mark.parametrize(
    "dup",
    [
        '{"kind":"node","id":0,"labels":["A"]}\n{"kind":"node","id":0,"labels":["B"]}',
        '{"kind":"node","id":0,"labels":["A"]}\n'
        '{"kind":"edge","id":1,"type":"T","from":0,"to":0}\n'
        '{"kind":"edge","id":1,"type":"T","from":0,"to":0}',
    ],
)
def test_duplicate_ids_rejected(dup):
    with pytest.raises(GraphLoadError, match="duplicate"):
        load_graph(dup)


def test_load_determinism(fixture_path):
    with open(fixture_path, "rb") as fh:
        data = fh.read()
    first = load_graph(io.BytesIO(data))
    second = load_graph(io.BytesIO(data))
    assert content_hash(first) == content_hash(second)
    assert first.nodes == second.nodes
    assert first.edges == second.edges
    assert first.adjacency == second.adjacency


def test_adjacency_soundness(fixture_graph):
    for edge in fixture_graph.edges.values():
        for nid, eids in fixture_graph.adjacency.items():
            member = edge.id in eids
            incident = nid in (edge.src, edge.dst)
            assert member == incident


# --- schema catalog ---------------------------------------------------------


def test_schema_empty_graph():
    catalog = schema_catalog(load_graph(""))
    assert catalog.labels == ()
    assert catalog.relationship_types == ()
    assert catalog.property_keys == {}


def test_schema_fixture():
    dump = "\n".join(
        [
            json.dumps({"kind": "node", "id": 0, "labels": ["AS"], "props": {"asn": 2497}}),
            json.dumps(
                {"kind": "node", "id": 1, "labels": ["Country"], "props": {"country_code": "JP"}}
            ),
            json.dumps(
                {"kind": "edge", "id": 0, "type": "POPULATION", "from": 0, "to": 1,
                 "props": {"percent": 52.0}}
            ),
        ]
    )
    catalog = schema_catalog(load_graph(dump))
    assert catalog.labels == ("AS", "Country")
    assert catalog.relationship_types == ("POPULATION",)
    assert catalog.property_keys == {
        "AS": ("asn",),
        "Country": ("country_code",),
        "POPULATION": ("percent",),
    }


def test_schema_multi_label_listed_once():
    dump = json.dumps({"kind": "node", "id": 0, "labels": ["AS", "Org", "AS"]})
    catalog = schema_catalog(load_graph(dump))
    assert catalog.labels == ("AS", "Org")


# --- node_text ---------------------------------------------------------------


def test_node_text_basic():
    dump = json.dumps(
        {"kind": "node", "id": 0, "labels": ["AS"], "props": {"asn": 2497, "name": "IIJ"}}
    )
    graph = load_graph(dump)
    assert node_text(graph, 0) == "AS | asn=2497; name=IIJ"


def test_node_text_no_properties():
    graph = load_graph(json.dumps({"kind": "node", "id": 0, "labels": ["AS"]}))
    assert node_text(graph, 0) == "AS | "


def test_node_text_neighbors(fixture_graph):
    text = node_text(fixture_graph, 0, include_neighbors=True)
    assert text.startswith("AS | asn=2497; name=IIJ")
    assert "rel: POPULATION->Country" in text


def test_node_text_unknown_node(fixture_graph):
    with pytest.raises(KeyError):
        node_text(fixture_graph, 999)


def test_node_text_injective_on_fixture(fixture_graph):
    texts = [node_text(fixture_graph, nid, True) for nid in fixture_graph.nodes]
    assert len(set(texts)) == len(texts)


# --- value comparison ---------------------------------------------------------


def test_compare_values_numeric_cross_kind():
    assert compare_values(52, 52.0) == 0
    assert compare_values(1, 2.5) == -1


@pytest.mark.parametrize("a,b", [("52", 52), (None, 1), (None, None), (True, 1), ("x", True)])
def test_compare_values_incomparable(a, b):
    assert compare_values(a, b) is None
