import pytest

from obddmin.boolfn import parse_expression

FIG1 = "x1&x2|x3&x4|x5&x6"

# one line per acceptance criterion, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fig1():
    return parse_expression(FIG1, 6)


@pytest.fixture
def xnor():
    return parse_expression("~(x1^x2)", 2)


@pytest.fixture
def majority():
    return parse_expression("x1&x2|x1&x3|x2&x3", 3)


@pytest.fixture
def acceptance(capsys):
    """Record (and echo) one PASS/FAIL line for a criterion."""

    def record(number, passed: bool, detail: str) -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
