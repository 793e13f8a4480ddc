import pytest

from mathieu_floquet import MathieuParams

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def unit():
    """gamma = eps = omega = 1 at m = 0.1."""
    return MathieuParams(0.1, 1.0, 1.0, 1.0)


@pytest.fixture
def acceptance_log():
    def record(number: int, ok: bool, text: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
