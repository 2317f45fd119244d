from pathlib import Path

import pytest

from pubmine.corpus import read_corpus
from pubmine.keyphrase import ExtractionConfig

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion, reported in the summary")


def pytest_runtest_logreport(report):
    label = report.user_properties and dict(report.user_properties).get("acceptance")
    if not label:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _acceptance.get(label)
        if prev in ("FAIL", "SKIP"):
            return
        _acceptance[label] = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker:
            item.user_properties.append(("acceptance", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance, key=lambda s: int(s.split()[0][2:])):
        terminalreporter.write_line(f"{_acceptance[label]:4}  {label}")


@pytest.fixture(scope="session")
def fixture_csv():
    return DATA / "fixture.csv"


@pytest.fixture(scope="session")
def fixture_corpus(fixture_csv):
    return read_corpus(fixture_csv)


@pytest.fixture
def no_stop():
    return ExtractionConfig(1, 2, 1, frozenset())
