"""Recursive-descent parser for the Cypher subset.

Supported grammar (keywords case-insensitive):

    query    := MATCH pattern (',' pattern)*
                [WHERE expr]
                RETURN [DISTINCT] item (',' item)*
                [ORDER BY orditem (',' orditem)*]
                [LIMIT INT]
    pattern  := node (edge node)*
    node     := '(' [var] (':' label)* [propmap] ')'
    edge     := '<-' '[' body ']' '-'            (left)
              | '-' '[' body ']' '->'            (right)
              | '-' '[' body ']' '-'             (undirected)
    body     := [var] [':' type] [propmap]
    propmap  := '{' key ':' literal (',' key ':' literal)* '}'
    item     := projection [AS alias]
    projection := aggfn '(' ('*' | ref) ')' | ref
    ref      := var ['.' key]
    expr     := or-expression over comparisons (=, <>, <, <=, >, >=),
                AND / OR / NOT, parentheses
"""

from __future__ import annotations

from typing import Optional

from . import ast
from .errors import CypherSyntaxError
from .lexer import EOF, FLOAT, IDENT, INT, OP, STRING, Token, tokenize

_KEYWORDS = {
    "MATCH",
    "WHERE",
    "RETURN",
    "DISTINCT",
    "ORDER",
    "BY",
    "LIMIT",
    "AND",
    "OR",
    "NOT",
    "AS",
    "ASC",
    "DESC",
    "TRUE",
    "FALSE",
    "NULL",
}


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.bound: set = set()

    # --- token helpers -------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise CypherSyntaxError(message, tok.line, tok.col, tok.text)

    def at_op(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == OP and tok.value == value

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == IDENT and tok.value.upper() == word

    def expect_op(self, value: str) -> Token:
        if not self.at_op(value):
            self.error(f"expected {value!r}")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.error(f"expected keyword {word}")
        return self.advance()

    def expect_name(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != IDENT or tok.value.upper() in _KEYWORDS:
            self.error(f"expected {what}")
        return self.advance().value

    def expect_any_name(self, what: str) -> str:
        # Labels, relationship types and property keys may shadow keywords
        # (the fixture schema itself has an AS label).
        tok = self.peek()
        if tok.kind != IDENT:
            self.error(f"expected {what}")
        return self.advance().value

    # --- grammar -------------------------------------------------------

    def parse_query(self) -> ast.CypherQuery:
        self.expect_keyword("MATCH")
        patterns = [self.parse_pattern()]
        while self.at_op(","):
            self.advance()
            patterns.append(self.parse_pattern())
        for pattern in patterns:
            for element in pattern.elements:
                if element.var:
                    self.bound.add(element.var)

        where = None
        if self.at_keyword("WHERE"):
            self.advance()
            where = self.parse_or_expr()

        self.expect_keyword("RETURN")
        distinct = False
        if self.at_keyword("DISTINCT"):
            self.advance()
            distinct = True
        items = [self.parse_return_item()]
        while self.at_op(","):
            self.advance()
            items.append(self.parse_return_item())

        order_by = []
        if self.at_keyword("ORDER"):
            self.advance()
            self.expect_keyword("BY")
            order_by.append(self.parse_order_item())
            while self.at_op(","):
                self.advance()
                order_by.append(self.parse_order_item())

        limit = None
        if self.at_keyword("LIMIT"):
            self.advance()
            tok = self.peek()
            if tok.kind != INT or tok.value < 0:
                self.error("expected a non-negative integer after LIMIT")
            limit = self.advance().value

        if self.peek().kind != EOF:
            self.error("unexpected trailing input")

        return ast.CypherQuery(
            patterns=tuple(patterns),
            where=where,
            return_items=tuple(items),
            distinct=distinct,
            order_by=tuple(order_by),
            limit=limit,
        )

    def parse_pattern(self) -> ast.PathPattern:
        elements = [self.parse_node_pattern()]
        while self.at_op("-") or self.at_op("<"):
            edge = self.parse_edge_pattern()
            node = self.parse_node_pattern()
            elements.extend([edge, node])
        return ast.PathPattern(elements=tuple(elements))

    def parse_node_pattern(self) -> ast.NodePattern:
        self.expect_op("(")
        var = None
        tok = self.peek()
        if tok.kind == IDENT and tok.value.upper() not in _KEYWORDS:
            var = self.advance().value
        labels = []
        while self.at_op(":"):
            self.advance()
            labels.append(self.expect_any_name("label name"))
        props = self.parse_prop_map() if self.at_op("{") else ()
        self.expect_op(")")
        return ast.NodePattern(var=var, labels=tuple(labels), props=props)

    def parse_edge_pattern(self) -> ast.EdgePattern:
        direction = ast.UNDIRECTED
        if self.at_op("<"):
            self.advance()
            self.expect_op("-")
            direction = ast.LEFT
        else:
            self.expect_op("-")
        self.expect_op("[")
        var = None
        tok = self.peek()
        if tok.kind == IDENT and tok.value.upper() not in _KEYWORDS:
            var = self.advance().value
        etype = None
        if self.at_op(":"):
            self.advance()
            etype = self.expect_any_name("relationship type")
        props = self.parse_prop_map() if self.at_op("{") else ()
        self.expect_op("]")
        self.expect_op("-")
        if self.at_op(">"):
            if direction == ast.LEFT:
                self.error("edge cannot point both ways")
            self.advance()
            direction = ast.RIGHT
        return ast.EdgePattern(var=var, type=etype, direction=direction, props=props)

    def parse_prop_map(self):
        self.expect_op("{")
        entries = {}
        while True:
            key = self.expect_any_name("property key")
            self.expect_op(":")
            entries[key] = self.parse_literal().value
            if self.at_op(","):
                self.advance()
                continue
            break
        self.expect_op("}")
        return tuple(sorted(entries.items()))

    def parse_literal(self) -> ast.Literal:
        tok = self.peek()
        if tok.kind in (INT, FLOAT, STRING):
            return ast.Literal(self.advance().value)
        if tok.kind == OP and tok.value == "-":
            self.advance()
            num = self.peek()
            if num.kind not in (INT, FLOAT):
                self.error("expected a number after '-'")
            return ast.Literal(-self.advance().value)
        if tok.kind == IDENT:
            word = tok.value.upper()
            if word == "TRUE":
                self.advance()
                return ast.Literal(True)
            if word == "FALSE":
                self.advance()
                return ast.Literal(False)
            if word == "NULL":
                self.advance()
                return ast.Literal(None)
        self.error("expected a literal")

    def parse_ref(self):
        tok = self.peek()
        name = self.expect_name("variable")
        if name not in self.bound:
            self.error(f"unbound variable {name!r}", tok)
        if self.at_op("."):
            self.advance()
            key = self.expect_any_name("property name")
            return ast.PropRef(var=name, key=key)
        return ast.VarRef(name=name)

    def parse_projection(self):
        tok = self.peek()
        if (
            tok.kind == IDENT
            and tok.value.lower() in ast.AGGREGATE_FNS
            and self.tokens[self.pos + 1].kind == OP
            and self.tokens[self.pos + 1].value == "("
        ):
            fn = self.advance().value.lower()
            self.advance()  # (
            if self.at_op("*"):
                if fn != "count":
                    self.error("'*' is only valid in count(*)")
                self.advance()
                arg = ast.Star()
            else:
                arg = self.parse_ref()
            self.expect_op(")")
            return ast.Aggregate(fn=fn, arg=arg)
        return self.parse_ref()

    def parse_return_item(self) -> ast.ReturnItem:
        projection = self.parse_projection()
        alias = None
        if self.at_keyword("AS"):
            self.advance()
            alias = self.expect_name("alias")
        return ast.ReturnItem(projection=projection, alias=alias)

    def parse_order_item(self) -> ast.OrderItem:
        projection = self.parse_projection()
        ascending = True
        if self.at_keyword("ASC"):
            self.advance()
        elif self.at_keyword("DESC"):
            self.advance()
            ascending = False
        return ast.OrderItem(projection=projection, ascending=ascending)

    # --- WHERE expression ----------------------------------------------

    def parse_or_expr(self):
        expr = self.parse_and_expr()
        while self.at_keyword("OR"):
            self.advance()
            expr = ast.Or(lhs=expr, rhs=self.parse_and_expr())
        return expr

    def parse_and_expr(self):
        expr = self.parse_not_expr()
        while self.at_keyword("AND"):
            self.advance()
            expr = ast.And(lhs=expr, rhs=self.parse_not_expr())
        return expr

    def parse_not_expr(self):
        if self.at_keyword("NOT"):
            self.advance()
            return ast.Not(operand=self.parse_not_expr())
        if self.at_op("("):
            self.advance()
            expr = self.parse_or_expr()
            self.expect_op(")")
            return expr
        return self.parse_comparison()

    def parse_comparison(self) -> ast.Comparison:
        lhs = self.parse_operand()
        tok = self.peek()
        if tok.kind != OP or tok.value not in ("=", "<>", "<", "<=", ">", ">="):
            self.error("expected a comparison operator")
        op = self.advance().value
        rhs = self.parse_operand()
        return ast.Comparison(op=op, lhs=lhs, rhs=rhs)

    def parse_operand(self):
        tok = self.peek()
        if tok.kind == IDENT and tok.value.upper() not in ("TRUE", "FALSE", "NULL"):
            return self.parse_ref()
        return self.parse_literal()


def parse(query_text: str) -> ast.CypherQuery:
    """Parse query text into a CypherQuery, or raise CypherSyntaxError."""
    return _Parser(tokenize(query_text)).parse_query()
