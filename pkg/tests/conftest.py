"""Shared pytest plumbing: collects acceptance verdict lines.

Acceptance tests report one ``[PASS]``/``[FAIL]`` line each through the
``verdict`` fixture; the lines are replayed in a terminal section after
the run so they stay visible under output capture.
"""

import pytest

_VERDICTS = []


@pytest.fixture(scope="session")
def verdict():
    def record(name: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        _VERDICTS.append(line)
        print(line, flush=True)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
