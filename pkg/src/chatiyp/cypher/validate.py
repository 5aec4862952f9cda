"""Read-only guard applied before any query reaches an executor."""

from __future__ import annotations

from typing import Union

from .ast import CypherQuery
from .errors import ReadOnlyViolation
from .lexer import IDENT, tokenize

FORBIDDEN_KEYWORDS = frozenset(
    {
        "CREATE",
        "MERGE",
        "DELETE",
        "DETACH",
        "SET",
        "REMOVE",
        "DROP",
        "CALL",
        "LOAD",
        "FOREACH",
    }
)


def validate_read_only(query: Union[str, CypherQuery]) -> None:
    """Raise ReadOnlyViolation if the query contains a write/procedure keyword.

    Keywords inside string literals are never clause keywords; the tokenizer
    discards string contents before the check. A parsed CypherQuery is always
    read-only since the grammar has no write clauses.
    """
    if isinstance(query, CypherQuery):
        return
    for token in tokenize(query):
        if token.kind == IDENT and token.value.upper() in FORBIDDEN_KEYWORDS:
            raise ReadOnlyViolation(token.value.upper())
