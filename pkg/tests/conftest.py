import os

import pytest

from chatiyp.graph import load_graph

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

Q1_QUESTION = "What is the percentage of Japan's population in AS2497?"
Q1_CYPHER = (
    "MATCH (:AS {asn:2497})-[p:POPULATION]-(:Country {country_code:'JP'}) "
    "RETURN p.percent"
)


@pytest.fixture(scope="session")
def fixture_path():
    return os.path.join(FIXTURES, "iyp_fixture.ndjson")


@pytest.fixture(scope="session")
def fixture_graph(fixture_path):
    with open(fixture_path, "rb") as fh:
        return load_graph(fh)


@pytest.fixture(scope="session")
def scripted_config_path():
    return os.path.join(FIXTURES, "chatiyp.scripted.json")


@pytest.fixture(scope="session")
def dataset_path():
    return os.path.join(FIXTURES, "dev_dataset.jsonl")


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): a release acceptance criterion"
    )
    config._criterion_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker:
        item.config._criterion_results.append((marker.args[0], report.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_criterion_results", [])
    if not results:
        return
    terminalreporter.write_line("")
    for name, passed in results:
        terminalreporter.write_line(
            f"CRITERION {name}: {'PASS' if passed else 'FAIL'}"
        )
