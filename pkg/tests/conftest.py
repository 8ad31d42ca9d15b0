from pathlib import Path

import pytest

from annc import parse_file
from annc.java import parse_java_file

FIXTURES = Path(__file__).parent / "fixtures"
ANN = FIXTURES / "ann"
JAVA = FIXTURES / "java"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def person_unit():
    return parse_file(ANN / "person.ann")


@pytest.fixture(scope="session")
def jpa_unit():
    return parse_file(ANN / "jpa.ann")


def java_program(*names):
    return [parse_java_file(p) for name in names for p in sorted((JAVA / name).rglob("*.java"))]


# one line per acceptance criterion, printed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
