"""Pattern-matching executor over an in-memory PropertyGraph.

Semantics:
- all patterns of the MATCH are matched jointly; variables are shared;
- relationship uniqueness: no edge is bound twice within one assignment;
- undirected edge elements match either orientation;
- WHERE comparisons between incomparable values filter the row out;
- aggregates group implicitly by the non-aggregate return items; with zero
  matched assignments there are no groups, hence no rows;
- without ORDER BY, rows come out sorted by the bound node/edge ids (or by
  group key for aggregated queries), so results are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from ..graph import PropertyGraph, PropertyValue, compare_values, sort_key
from . import ast
from .errors import CypherError
from .render import render_projection


@dataclass(frozen=True)
class RowSet:
    columns: Tuple[str, ...]
    rows: Tuple[tuple, ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width does not match column count")

    def to_dict(self) -> dict:
        return {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}


@dataclass
class _Env:
    vars: dict  # name -> ("node" | "edge", id)
    bindings: tuple  # element ids in pattern order, anonymous included


def _props_match(properties: dict, constraints) -> bool:
    for key, expected in constraints:
        actual = properties.get(key)
        if compare_values(actual, expected) != 0:
            return False
    return True


def _node_matches(node, element: ast.NodePattern) -> bool:
    if element.labels and not set(element.labels) <= node.labels:
        return False
    return _props_match(node.properties, element.props)


def _edge_matches(edge, element: ast.EdgePattern) -> bool:
    if element.type is not None and edge.type != element.type:
        return False
    return _props_match(edge.properties, element.props)


def _edge_candidates(graph: PropertyGraph, prev_id: int, direction: str):
    """Yield (edge, next node id) pairs reachable from prev_id, in edge-id order."""
    for edge in graph.incident_edges(prev_id):
        if direction == ast.RIGHT:
            if edge.src == prev_id:
                yield edge, edge.dst
        elif direction == ast.LEFT:
            if edge.dst == prev_id:
                yield edge, edge.src
        else:
            if edge.src == prev_id:
                yield edge, edge.dst
            if edge.dst == prev_id and edge.dst != edge.src:
                yield edge, edge.src


def _match_all(query: ast.CypherQuery, graph: PropertyGraph) -> List[_Env]:
    envs: List[_Env] = []
    node_ids = sorted(graph.nodes)

    def bind(vars, kind, name, element_id):
        if name is None:
            return vars
        existing = vars.get(name)
        if existing is not None:
            return vars if existing == (kind, element_id) else None
        new = dict(vars)
        new[name] = (kind, element_id)
        return new

    def match_pattern(pattern_idx, vars, bindings, used_edges):
        if pattern_idx == len(query.patterns):
            envs.append(_Env(vars=vars, bindings=tuple(bindings)))
            return
        elements = query.patterns[pattern_idx].elements

        def extend(elem_idx, current_node, vars, bindings, used_edges):
            if elem_idx == len(elements):
                match_pattern(pattern_idx + 1, vars, bindings, used_edges)
                return
            edge_elem = elements[elem_idx]
            node_elem = elements[elem_idx + 1]
            for edge, next_id in _edge_candidates(graph, current_node, edge_elem.direction):
                if edge.id in used_edges:
                    continue
                if not _edge_matches(edge, edge_elem):
                    continue
                next_node = graph.nodes[next_id]
                if not _node_matches(next_node, node_elem):
                    continue
                v1 = bind(vars, "edge", edge_elem.var, edge.id)
                if v1 is None:
                    continue
                v2 = bind(v1, "node", node_elem.var, next_id)
                if v2 is None:
                    continue
                extend(
                    elem_idx + 2,
                    next_id,
                    v2,
                    bindings + [edge.id, next_id],
                    used_edges | {edge.id},
                )

        first = elements[0]
        for node_id in node_ids:
            node = graph.nodes[node_id]
            if not _node_matches(node, first):
                continue
            v = bind(vars, "node", first.var, node_id)
            if v is None:
                continue
            extend(1, node_id, v, bindings + [node_id], used_edges)

    match_pattern(0, {}, [], frozenset())
    return envs


def _eval_ref(ref, env: _Env, graph: PropertyGraph) -> PropertyValue:
    if isinstance(ref, ast.VarRef):
        # Bare variables project the bound element's id.
        return env.vars[ref.name][1]
    if isinstance(ref, ast.PropRef):
        kind, element_id = env.vars[ref.var]
        element = graph.nodes[element_id] if kind == "node" else graph.edges[element_id]
        return element.properties.get(ref.key)
    raise CypherError(f"cannot evaluate {ref!r} per row")


def _eval_operand(operand, env: _Env, graph: PropertyGraph) -> PropertyValue:
    if isinstance(operand, ast.Literal):
        return operand.value
    return _eval_ref(operand, env, graph)


def _eval_expr(expr, env: _Env, graph: PropertyGraph) -> bool:
    if isinstance(expr, ast.Comparison):
        cmp = compare_values(
            _eval_operand(expr.lhs, env, graph), _eval_operand(expr.rhs, env, graph)
        )
        if cmp is None:
            return False
        return {
            "=": cmp == 0,
            "<>": cmp != 0,
            "<": cmp < 0,
            "<=": cmp <= 0,
            ">": cmp > 0,
            ">=": cmp >= 0,
        }[expr.op]
    if isinstance(expr, ast.And):
        return _eval_expr(expr.lhs, env, graph) and _eval_expr(expr.rhs, env, graph)
    if isinstance(expr, ast.Or):
        return _eval_expr(expr.lhs, env, graph) or _eval_expr(expr.rhs, env, graph)
    if isinstance(expr, ast.Not):
        return not _eval_expr(expr.operand, env, graph)
    raise CypherError(f"unsupported expression {expr!r}")


def _aggregate(fn: str, arg, group: List[_Env], graph: PropertyGraph) -> PropertyValue:
    if fn == "count" and isinstance(arg, ast.Star):
        return len(group)
    values = [_eval_ref(arg, env, graph) for env in group]
    values = [v for v in values if v is not None]
    if fn == "count":
        return len(values)
    numeric = [v for v in values if isinstance(v, (int, float)) and not isinstance(v, bool)]
    if fn == "sum":
        return sum(numeric) if numeric else 0
    if fn == "avg":
        return sum(numeric) / len(numeric) if numeric else None
    if not values:
        return None
    if fn == "min":
        return min(values, key=sort_key)
    if fn == "max":
        return max(values, key=sort_key)
    raise CypherError(f"unknown aggregate {fn}")


def _order_key_indexes(query: ast.CypherQuery) -> List[Tuple[int, bool]]:
    """Map each ORDER BY item onto a return-item column, if possible."""
    indexes = []
    for item in query.order_by:
        for i, ret in enumerate(query.return_items):
            if ret.projection == item.projection:
                indexes.append((i, item.ascending))
                break
        else:
            indexes.append((-1, item.ascending))
    return indexes


def execute(query: ast.CypherQuery, graph: PropertyGraph) -> RowSet:
    envs = _match_all(query, graph)
    if query.where is not None:
        envs = [env for env in envs if _eval_expr(query.where, env, graph)]

    columns = tuple(
        item.alias or render_projection(item.projection) for item in query.return_items
    )
    has_aggregate = any(
        isinstance(item.projection, ast.Aggregate) for item in query.return_items
    )

    if has_aggregate:
        rows = _execute_aggregated(query, envs, graph)
    else:
        rows = _execute_plain(query, envs, graph)

    if query.distinct:
        seen = set()
        deduped = []
        for row in rows:
            if row not in seen:
                seen.add(row)
                deduped.append(row)
        rows = deduped

    order = _order_key_indexes(query)
    if order:
        if any(i < 0 for i, _ in order) and has_aggregate:
            raise CypherError("ORDER BY on an aggregated query must reference a return item")
        for col, ascending in reversed(order):
            rows.sort(key=lambda row: sort_key(row[col]), reverse=not ascending)

    if query.limit is not None:
        rows = rows[: query.limit]

    return RowSet(columns=columns, rows=tuple(rows))


def _execute_plain(query, envs, graph) -> List[tuple]:
    envs = sorted(envs, key=lambda env: env.bindings)
    order = _order_key_indexes(query)
    if any(i < 0 for i, _ in order):
        # ORDER BY on something not in the return items: sort envs by the
        # order projections evaluated per assignment, then project.
        for item in reversed(query.order_by):
            envs.sort(
                key=lambda env: sort_key(_eval_ref(item.projection, env, graph)),
                reverse=not item.ascending,
            )
    return [
        tuple(_eval_ref(item.projection, env, graph) for item in query.return_items)
        for env in envs
    ]


def _execute_aggregated(query, envs, graph) -> List[tuple]:
    plain_items = [
        (i, item)
        for i, item in enumerate(query.return_items)
        if not isinstance(item.projection, ast.Aggregate)
    ]
    groups: dict = {}
    group_order: list = []
    for env in sorted(envs, key=lambda e: e.bindings):
        key = tuple(_eval_ref(item.projection, env, graph) for _, item in plain_items)
        marker = tuple(sort_key(v) for v in key)
        if marker not in groups:
            groups[marker] = (key, [])
            group_order.append(marker)
        groups[marker][1].append(env)

    rows = []
    for marker in sorted(group_order):
        key, members = groups[marker]
        row = []
        plain_iter = iter(key)
        for item in query.return_items:
            if isinstance(item.projection, ast.Aggregate):
                row.append(
                    _aggregate(item.projection.fn, item.projection.arg, members, graph)
                )
            else:
                row.append(next(plain_iter))
        rows.append(tuple(row))
    return rows
