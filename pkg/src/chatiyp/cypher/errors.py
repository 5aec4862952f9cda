class CypherError(Exception):
    """Base class for all Cypher subsystem errors."""


class CypherSyntaxError(CypherError):
    def __init__(self, message: str, line: int, col: int, token: str = ""):
        self.line = line
        self.col = col
        self.token = token
        detail = f" near {token!r}" if token else ""
        super().__init__(f"syntax error at line {line}, col {col}{detail}: {message}")


class ReadOnlyViolation(CypherError):
    def __init__(self, keyword: str):
        self.keyword = keyword
        super().__init__(f"query rejected: write/procedure keyword {keyword}")
