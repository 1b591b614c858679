import sys

import pytest

from symcurv.liealg import builtin, canonical_connection

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def aff():
    return canonical_connection(builtin("aff1c"))


@pytest.fixture(scope="session")
def r40():
    return canonical_connection(builtin("r40"))


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def record(number, title, checks, detail=""):
        failed = [name for name, ok in checks.items() if not ok]
        line = "%s criterion %2d  %s (%d/%d sub-checks)" % (
            "FAIL" if failed else "PASS", number, title, len(checks) - len(failed), len(checks),
        )
        if detail:
            line += "; " + detail
        if failed:
            line += "; failed: " + ", ".join(failed)
        ACCEPTANCE_LINES.append((number, line))
        # bypass capsys so the line shows under -s even inside capturing tests
        print(line, file=sys.__stdout__, flush=True)
        assert not failed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
