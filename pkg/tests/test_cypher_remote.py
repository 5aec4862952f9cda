import json

import httpx
import pytest

from chatiyp.cypher import (
    ReadOnlyViolation,
    RemoteEndpointConfig,
    RemoteQueryError,
    RemoteTransportError,
    execute_remote,
)

ENDPOINT = RemoteEndpointConfig(base_url="http://graph.example", database="iyp")


def make_client(handler):
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_success_maps_rows():
    captured = {}

    def handler(request):
        captured["url"] = str(request.url)
        captured["body"] = json.loads(request.content)
        return httpx.Response(
            200,
            json={
                "results": [{"columns": ["p.percent"], "data": [{"row": [52.0]}]}],
                "errors": [],
            },
        )

    result = execute_remote("MATCH (a) RETURN a", ENDPOINT, client=make_client(handler))
    assert captured["url"] == "http://graph.example/db/iyp/tx/commit"
    assert captured["body"] == {"statements": [{"statement": "MATCH (a) RETURN a"}]}
    assert result.columns == ("p.percent",)
    assert result.rows == ((52.0,),)


def test_remote_error_surfaced_verbatim():
    def handler(request):
        return httpx.Response(
            200,
            json={
                "results": [],
                "errors": [{"code": "Neo.ClientError.Statement.SyntaxError",
                            "message": "Invalid input 'FOO'"}],
            },
        )

    with pytest.raises(RemoteQueryError, match="Invalid input 'FOO'"):
        execute_remote("MATCH (a) RETURN a", ENDPOINT, client=make_client(handler))


def test_non_2xx_is_transport_error():
    def handler(request):
        return httpx.Response(500, text="boom")

    with pytest.raises(RemoteTransportError, match="500"):
        execute_remote("MATCH (a) RETURN a", ENDPOINT, client=make_client(handler))


def test_network_failure_is_transport_error():
    def handler(request):
        raise httpx.ConnectError("unreachable")

    with pytest.raises(RemoteTransportError, match="unreachable"):
        execute_remote("MATCH (a) RETURN a", ENDPOINT, client=make_client(handler))


def test_write_query_rejected_before_any_request():
    def handler(request):
        raise AssertionError("request must not be sent")

    with pytest.raises(ReadOnlyViolation):
        execute_remote("CREATE (n)", ENDPOINT, client=make_client(handler))


def test_bearer_auth_header():
    seen = {}

    def handler(request):
        seen["auth"] = request.headers.get("Authorization")
        return httpx.Response(200, json={"results": [], "errors": []})

    endpoint = RemoteEndpointConfig(base_url="http://x", bearer_token="tok123")
    execute_remote("MATCH (a) RETURN a", endpoint, client=make_client(handler))
    assert seen["auth"] == "Bearer tok123"


def test_basic_auth_header():
    seen = {}

    def handler(request):
        seen["auth"] = request.headers.get("Authorization")
        return httpx.Response(200, json={"results": [], "errors": []})

    endpoint = RemoteEndpointConfig(base_url="http://x", username="neo4j", password="pw")
    execute_remote("MATCH (a) RETURN a", endpoint, client=make_client(handler))
    assert seen["auth"].startswith("Basic ")
