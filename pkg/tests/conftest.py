import pytest

_LINES = []


@pytest.fixture
def report_line():
    """Record a one-line verdict that is repeated in the terminal summary."""
    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
