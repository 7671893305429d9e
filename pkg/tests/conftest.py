import pytest

_LINES: dict = {}


@pytest.fixture
def criterion():
    """Record one pass/fail summary line for an acceptance criterion."""
    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
        _LINES[number] = line + (f": {detail}" if detail else "")
        print(_LINES[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_LINES):
            terminalreporter.write_line(_LINES[number])
