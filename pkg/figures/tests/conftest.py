"""Fixtures for the figures suite: CLI-generated smoke inputs and the
acceptance verdict recorder."""

import os
import subprocess

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
        terminalreporter.section("figures acceptance")
        for line in _VERDICTS:
            terminalreporter.write_line(line)


def _run(args, env):
    proc = subprocess.run(args, capture_output=True, text=True, env=env)
    assert proc.returncode == 0, f"{args} failed: {proc.stderr}"


@pytest.fixture(scope="session")
def smoke_dir(tmp_path_factory):
    # 5-replication smoke outputs produced through the estimator CLI --
    # the only interface this package is allowed to consume
    root = tmp_path_factory.mktemp("smoke")
    env = dict(os.environ, WAVEREG_CACHE=str(root / "cache"))
    _run(["wavereg", "reproduce", "--reps", "5", "--tables", "1,3",
          "--figures", "1,2,4,5", "--seed", "12345",
          "--out-dir", str(root / "repro")], env)
    _run(["wavereg", "gamma-scan", "--scenario", "paper-beta22-0075",
          "--x", "0.25", "--reps", "5", "--seed", "12345",
          "--out-dir", str(root / "scan")], env)
    _run(["wavereg", "simulate", "--scenario", "paper-u-0075", "--reps", "5",
          "--seed", "12345", "--out-dir", str(root / "sim")], env)
    return root
