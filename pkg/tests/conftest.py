"""Shared fixtures; collects the one-line acceptance verdicts for the summary."""

import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    """``verdict(n, ok, text)`` records and prints one PASS/FAIL line."""

    def record(number, ok, text):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {text}"
        print(line)
        _VERDICTS.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
