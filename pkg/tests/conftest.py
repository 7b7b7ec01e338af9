import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_check():
    def _record(result):
        ACCEPTANCE_LINES.append(result.line())
        print(result.line())
        return result
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
