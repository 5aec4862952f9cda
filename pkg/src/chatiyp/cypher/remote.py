"""Client for a graph database's HTTP transactional endpoint.

Wire format: POST {base_url}/db/{database}/tx/commit with body
{"statements":[{"statement": "<query>"}]}; the response carries
{"results":[{"columns":[...], "data":[{"row":[...]}, ...]}], "errors":[...]}.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass
from typing import Optional

import httpx

from .errors import CypherError
from .executor import RowSet
from .validate import validate_read_only


class RemoteTransportError(CypherError):
    """Network failure, timeout, or non-2xx HTTP status."""


class RemoteQueryError(CypherError):
    """The database reported a query error; message is surfaced verbatim."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class RemoteEndpointConfig:
    base_url: str
    database: str = "neo4j"
    bearer_token: Optional[str] = None
    username: Optional[str] = None
    password: Optional[str] = None
    timeout: float = 10.0

    def auth_headers(self) -> dict:
        if self.bearer_token:
            return {"Authorization": f"Bearer {self.bearer_token}"}
        if self.username is not None:
            raw = f"{self.username}:{self.password or ''}".encode("utf-8")
            return {"Authorization": "Basic " + base64.b64encode(raw).decode("ascii")}
        return {}


def execute_remote(
    query_text: str,
    endpoint: RemoteEndpointConfig,
    client: Optional[httpx.Client] = None,
) -> RowSet:
    """Run a read-only query against the remote transactional endpoint."""
    validate_read_only(query_text)
    url = f"{endpoint.base_url.rstrip('/')}/db/{endpoint.database}/tx/commit"
    body = {"statements": [{"statement": query_text}]}
    headers = {"Content-Type": "application/json", **endpoint.auth_headers()}
    own_client = client is None
    if own_client:
        client = httpx.Client(timeout=endpoint.timeout)
    try:
        try:
            response = client.post(url, json=body, headers=headers, timeout=endpoint.timeout)
        except httpx.HTTPError as exc:
            raise RemoteTransportError(f"request to {url} failed: {exc}") from exc
        if response.status_code < 200 or response.status_code >= 300:
            raise RemoteTransportError(
                f"endpoint returned HTTP {response.status_code}: {response.text[:500]}"
            )
        payload = response.json()
    finally:
        if own_client:
            client.close()

    errors = payload.get("errors") or []
    if errors:
        first = errors[0]
        raise RemoteQueryError(first.get("code", "unknown"), first.get("message", ""))
    results = payload.get("results") or []
    if not results:
        return RowSet(columns=(), rows=())
    result = results[0]
    columns = tuple(result.get("columns", ()))
    rows = tuple(tuple(entry.get("row", ())) for entry in result.get("data", ()))
    return RowSet(columns=columns, rows=rows)
