from fractions import Fraction

import pytest

from heintze.algebra import structure_from_brackets, validate_algebra
from heintze.corpus import load_fixture
from heintze.invariants import make_heintze
from heintze.spectral import validate_derivation

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def k1():
    return validate_algebra(structure_from_brackets(3, [(0, 1, 2, 1)]), ("X", "Y", "Z"))


def diag(*values):
    n = len(values)
    return tuple(tuple(Fraction(values[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n))


@pytest.fixture(scope="session")
def gamma1():
    return load_fixture("gamma1")


@pytest.fixture(scope="session")
def gamma2():
    return load_fixture("gamma2")


@pytest.fixture(scope="session")
def heis_diag():
    return load_fixture("heisenberg-diag")


@pytest.fixture(scope="session")
def heis_block():
    return load_fixture("heisenberg-block")


def abelian(n: int):
    return validate_algebra(structure_from_brackets(n, []))


def heintze_from(a, matrix, name=""):
    return make_heintze(a, validate_derivation(a, matrix), name)
