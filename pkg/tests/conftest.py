import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def report():
    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
