"""Hand-rolled tokenizer. Keywords are case-insensitive and classified by the
parser; the lexer only distinguishes identifiers, literals and punctuation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CypherSyntaxError

IDENT = "IDENT"
INT = "INT"
FLOAT = "FLOAT"
STRING = "STRING"
OP = "OP"
EOF = "EOF"

_TWO_CHAR_OPS = ("<=", ">=", "<>")
_ONE_CHAR_OPS = "()[]{},.:-<>=*"


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    text: str
    line: int
    col: int


def tokenize(source: str):
    """Return the token list, terminated by an EOF token."""
    tokens = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(msg, tok=""):
        raise CypherSyntaxError(msg, line, col, tok)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch in "'\"":
            quote = ch
            j = i + 1
            buf = []
            while j < n and source[j] != quote:
                if source[j] == "\\" and j + 1 < n:
                    buf.append(source[j + 1])
                    j += 2
                else:
                    buf.append(source[j])
                    j += 1
            if j >= n:
                error("unterminated string literal", quote)
            text = source[i : j + 1]
            tokens.append(Token(STRING, "".join(buf), text, start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            is_float = False
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            kind = FLOAT if is_float else INT
            value = float(text) if is_float else int(text)
            tokens.append(Token(kind, value, text, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            tokens.append(Token(IDENT, text, text, start_line, start_col))
            col += j - i
            i = j
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token(OP, two, two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token(OP, ch, ch, start_line, start_col))
            i += 1
            col += 1
            continue
        error(f"unexpected character {ch!r}", ch)

    tokens.append(Token(EOF, None, "", line, col))
    return tokens
