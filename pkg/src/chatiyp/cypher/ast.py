"""AST node types for the Cypher subset.

Structural equality via dataclasses is relied on by the round-trip tests
(parse . render . parse == parse).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from ..graph import PropertyValue

LEFT = "left"
RIGHT = "right"
UNDIRECTED = "undirected"


@dataclass(frozen=True)
class Literal:
    value: PropertyValue


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class PropRef:
    var: str
    key: str


@dataclass(frozen=True)
class Star:
    pass


AGGREGATE_FNS = ("count", "sum", "avg", "min", "max")


@dataclass(frozen=True)
class Aggregate:
    fn: str  # one of AGGREGATE_FNS
    arg: Union[VarRef, PropRef, Star]  # Star only for count(*)


Projection = Union[VarRef, PropRef, Aggregate]


@dataclass(frozen=True)
class Comparison:
    op: str  # =, <>, <, <=, >, >=
    lhs: Union[VarRef, PropRef, Literal]
    rhs: Union[VarRef, PropRef, Literal]


@dataclass(frozen=True)
class And:
    lhs: "BooleanExpr"
    rhs: "BooleanExpr"


@dataclass(frozen=True)
class Or:
    lhs: "BooleanExpr"
    rhs: "BooleanExpr"


@dataclass(frozen=True)
class Not:
    operand: "BooleanExpr"


BooleanExpr = Union[Comparison, And, Or, Not]


@dataclass(frozen=True)
class NodePattern:
    var: Optional[str] = None
    labels: Tuple[str, ...] = ()
    props: Tuple[Tuple[str, PropertyValue], ...] = ()  # sorted by key at parse time


@dataclass(frozen=True)
class EdgePattern:
    var: Optional[str] = None
    type: Optional[str] = None
    direction: str = UNDIRECTED  # left | right | undirected
    props: Tuple[Tuple[str, PropertyValue], ...] = ()


@dataclass(frozen=True)
class PathPattern:
    # Alternating NodePattern, EdgePattern, NodePattern, ...; starts/ends with a node.
    elements: Tuple[Union[NodePattern, EdgePattern], ...]

    def nodes(self):
        return self.elements[0::2]

    def edges(self):
        return self.elements[1::2]


@dataclass(frozen=True)
class ReturnItem:
    projection: Projection
    alias: Optional[str] = None


@dataclass(frozen=True)
class OrderItem:
    projection: Projection
    ascending: bool = True


@dataclass(frozen=True)
class CypherQuery:
    patterns: Tuple[PathPattern, ...]
    return_items: Tuple[ReturnItem, ...]
    where: Optional[BooleanExpr] = None
    distinct: bool = False
    order_by: Tuple[OrderItem, ...] = ()
    limit: Optional[int] = None

    def bound_variables(self):
        names = set()
        for pattern in self.patterns:
            for element in pattern.elements:
                if element.var:
                    names.add(element.var)
        return names
