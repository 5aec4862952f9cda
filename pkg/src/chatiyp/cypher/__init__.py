"""Read-only Cypher subset: parser, validator, renderer, executor, remote client."""

from .ast import (
    Aggregate,
    Comparison,
    CypherQuery,
    EdgePattern,
    Literal,
    NodePattern,
    PathPattern,
    PropRef,
    Star,
    VarRef,
)
from .errors import CypherError, CypherSyntaxError, ReadOnlyViolation
from .executor import RowSet, execute
from .parser import parse
from .render import render
from .validate import validate_read_only
from .remote import (
    RemoteEndpointConfig,
    RemoteQueryError,
    RemoteTransportError,
    execute_remote,
)

__all__ = [
    "Aggregate",
    "Comparison",
    "CypherQuery",
    "CypherError",
    "CypherSyntaxError",
    "EdgePattern",
    "Literal",
    "NodePattern",
    "PathPattern",
    "PropRef",
    "ReadOnlyViolation",
    "RemoteEndpointConfig",
    "RemoteQueryError",
    "RemoteTransportError",
    "RowSet",
    "Star",
    "VarRef",
    "execute",
    "execute_remote",
    "parse",
    "render",
    "validate_read_only",
]
