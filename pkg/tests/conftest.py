import pytest

_LINES: list[str] = []


@pytest.fixture
def report():
    """Print one PASS/FAIL line for an acceptance criterion, then assert it."""

    def _report(name: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        print(line)
        _LINES.append(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
