import os

import pytest

from bicrossed import fixtures
from bicrossed.groups import standard_corpus

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


@pytest.fixture(scope="session")
def corpus():
    return standard_corpus()


@pytest.fixture(scope="session")
def corpus_pairs():
    return fixtures.corpus_pairs()


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def criterion_log(request):
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    log = getattr(request.config, "_criterion_lines", None)
    if log is None:
        log = request.config._criterion_lines = {}
    return log


def pytest_terminal_summary(terminalreporter, config):
    log = getattr(config, "_criterion_lines", None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(log):
        terminalreporter.write_line(log[n])
