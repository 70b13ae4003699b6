import pytest

_REPORT = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    _REPORT[number] = (title, ok, detail)


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_REPORT):
        title, ok, detail = _REPORT[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
