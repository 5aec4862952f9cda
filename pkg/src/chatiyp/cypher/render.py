"""Canonical query rendering: uppercase keywords, single spaces, single quotes.

render is a fixed point: render(parse(render(ast))) == render(ast).
"""

from __future__ import annotations

from . import ast

_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3


def _render_value(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace("'", "\\'")
        return f"'{escaped}'"
    return repr(value)


def _render_props(props) -> str:
    inner = ", ".join(f"{key}: {_render_value(value)}" for key, value in props)
    return "{" + inner + "}"


def _render_node(node: ast.NodePattern) -> str:
    head = node.var or ""
    head += "".join(f":{label}" for label in node.labels)
    if node.props:
        head = f"{head} {_render_props(node.props)}" if head else _render_props(node.props)
    return f"({head})"


def _render_edge(edge: ast.EdgePattern) -> str:
    body = edge.var or ""
    if edge.type:
        body += f":{edge.type}"
    if edge.props:
        body = f"{body} {_render_props(edge.props)}" if body else _render_props(edge.props)
    core = f"[{body}]"
    if edge.direction == ast.LEFT:
        return f"<-{core}-"
    if edge.direction == ast.RIGHT:
        return f"-{core}->"
    return f"-{core}-"


def _render_pattern(pattern: ast.PathPattern) -> str:
    parts = []
    for i, element in enumerate(pattern.elements):
        parts.append(_render_node(element) if i % 2 == 0 else _render_edge(element))
    return "".join(parts)


def render_projection(projection) -> str:
    if isinstance(projection, ast.VarRef):
        return projection.name
    if isinstance(projection, ast.PropRef):
        return f"{projection.var}.{projection.key}"
    if isinstance(projection, ast.Aggregate):
        arg = "*" if isinstance(projection.arg, ast.Star) else render_projection(projection.arg)
        return f"{projection.fn}({arg})"
    raise TypeError(f"not a projection: {projection!r}")


def _render_operand(operand) -> str:
    if isinstance(operand, ast.Literal):
        return _render_value(operand.value)
    return render_projection(operand)


def _render_expr(expr, ambient: int = 0) -> str:
    if isinstance(expr, ast.Comparison):
        return f"{_render_operand(expr.lhs)} {expr.op} {_render_operand(expr.rhs)}"
    if isinstance(expr, ast.And):
        text = f"{_render_expr(expr.lhs, _PREC_AND)} AND {_render_expr(expr.rhs, _PREC_AND + 1)}"
        return f"({text})" if ambient > _PREC_AND else text
    if isinstance(expr, ast.Or):
        text = f"{_render_expr(expr.lhs, _PREC_OR)} OR {_render_expr(expr.rhs, _PREC_OR + 1)}"
        return f"({text})" if ambient > _PREC_OR else text
    if isinstance(expr, ast.Not):
        return f"NOT {_render_expr(expr.operand, _PREC_NOT)}"
    raise TypeError(f"not a boolean expression: {expr!r}")


def render(query: ast.CypherQuery) -> str:
    """Render a query AST back to canonical text."""
    parts = ["MATCH " + ", ".join(_render_pattern(p) for p in query.patterns)]
    if query.where is not None:
        parts.append("WHERE " + _render_expr(query.where))
    items = ", ".join(
        render_projection(item.projection) + (f" AS {item.alias}" if item.alias else "")
        for item in query.return_items
    )
    parts.append(("RETURN DISTINCT " if query.distinct else "RETURN ") + items)
    if query.order_by:
        order = ", ".join(
            render_projection(item.projection) + ("" if item.ascending else " DESC")
            for item in query.order_by
        )
        parts.append("ORDER BY " + order)
    if query.limit is not None:
        parts.append(f"LIMIT {query.limit}")
    return " ".join(parts)
