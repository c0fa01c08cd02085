import pytest

from powfrac import IntPolynomial, classify

LEHMER = "z^10+z^9-z^7-z^6-z^5-z^4-z^3+z+1"

CORPUS = {
    "golden": "z^2-z-1",
    "two": "z-2",
    "plastic": "z^3-z-1",
    "golden_sq": "z^2-3z+1",
    "lehmer": LEHMER,
    "salem4": "z^4-z^3-z^2-z+1",
    "three_halves": "2z-3",
}

_numbers = {}


def number(name):
    if name not in _numbers:
        _numbers[name] = classify(IntPolynomial.parse(CORPUS[name]))
    return _numbers[name]


@pytest.fixture(scope="session")
def golden():
    return number("golden")


@pytest.fixture(scope="session")
def plastic():
    return number("plastic")


@pytest.fixture(scope="session")
def lehmer():
    return number("lehmer")


@pytest.fixture(scope="session")
def salem4():
    return number("salem4")


@pytest.fixture(scope="session")
def three_halves():
    return number("three_halves")


@pytest.fixture(scope="session")
def two():
    return number("two")


# acceptance lines are collected here and echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":").split(".")[0])):
            terminalreporter.write_line(line)
