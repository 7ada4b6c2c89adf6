"""Shared fixtures: session-scoped Green evaluators and a CLI cache dir.

The full-size evaluator build runs the exact transition-table evolution
once and is reused by every test that needs lattice Green values.
"""

import os

import pytest

from subwalk import build_evaluators, power_alpha


@pytest.fixture(scope="session")
def evaluators():
    """Full-size evaluators for alpha=1 and alpha=2 on Z^3, keyed by alpha."""
    ev1, ev2 = build_evaluators([power_alpha(1.0), power_alpha(2.0)])
    return {1.0: ev1, 2.0: ev2}


@pytest.fixture(scope="session")
def ev1(evaluators):
    return evaluators[1.0]


@pytest.fixture(scope="session")
def ev2(evaluators):
    return evaluators[2.0]


@pytest.fixture(scope="session")
def small_evaluators():
    """Reduced-size evaluators (cheap build) for splitting/bound tests."""
    ev1, ev2 = build_evaluators([power_alpha(1.0), power_alpha(2.0)],
                                K1=128, box_radius=64, n_renewal=4096)
    return {1.0: ev1, 2.0: ev2}


@pytest.fixture(scope="session")
def cli_cache(tmp_path_factory):
    """Cache directory shared by all CLI invocations in the session."""
    d = tmp_path_factory.mktemp("clicache")
    return str(d)


@pytest.fixture()
def cli_env(cli_cache, monkeypatch):
    monkeypatch.setenv("SUBWALK_CACHE", cli_cache)
    return dict(os.environ, SUBWALK_CACHE=cli_cache)


# release-gate scoreboard: tests in test_acceptance.py append one line per
# criterion; the summary hook replays them after the test report so the
# pass/fail ledger is visible even with output capture on
_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("release-gate scoreboard")
    for line in _ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
