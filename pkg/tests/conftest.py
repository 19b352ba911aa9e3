import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line; lines are echoed now and in the terminal summary."""

    def _report(label: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        print(line)
        _ACCEPTANCE.append(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
