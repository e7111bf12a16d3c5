from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import fixtures  # noqa: E402

_acceptance_outcomes: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    """Collect one outcome line per acceptance criterion test."""
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        outcome = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and (report.failed or report.skipped):
        outcome = "FAIL" if report.failed else "SKIP"
    else:
        return
    _acceptance_outcomes.append((name, outcome))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_outcomes:
        terminalreporter.write_line(f"ACCEPTANCE {name}: {outcome}")


@pytest.fixture()
def benchmark_tree(tmp_path):
    """The aluminum benchmark written to disk: benchmark, factors, mocks."""
    return fixtures.write_benchmark_tree(tmp_path)


@pytest.fixture()
def aluminum_catalog():
    """The three fixture documents loaded into a catalog."""
    from carbonrag import Catalog

    catalog = Catalog()
    for doc_id, title, body in fixtures.CORPUS_DOCS:
        catalog.ingest("raw_text", body, {"doc_id": doc_id, "title": title})
    return catalog
