import pytest

ACCEPTANCE: list[str] = []


@pytest.fixture
def accept():
    """Record one acceptance line; call with the criterion id, description and outcome."""

    def record(cid: str, description: str, ok: bool, note: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {cid}: {description}"
        if note:
            line += f"  [{note}]"
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
