"""Shared test plumbing: a recorder that prints one summary line per
acceptance criterion at the end of the pytest run."""

_CRITERION_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    _CRITERION_LINES[number] = f"CRITERION {number}: {verdict} ({detail})"


import pytest


@pytest.fixture
def criterion():
    """Recorder handed to acceptance tests: criterion(n, ok, detail)."""
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(_CRITERION_LINES):
        terminalreporter.write_line(_CRITERION_LINES[number])
