from fractions import Fraction

import pytest

from charlier_sobolev import MomentTable, Params, PrecisionPolicy, build_families, build_Pn_gram, build_Sn

DEFAULT_PARAMS = Params(Fraction(1, 2), 1, 1)


@pytest.fixture(scope="session")
def policy():
    return PrecisionPolicy()


@pytest.fixture(scope="session")
def params():
    return DEFAULT_PARAMS


@pytest.fixture(scope="session")
def table(params, policy):
    return MomentTable.build(params, 21, policy)


@pytest.fixture(scope="session")
def charlier(table):
    return build_Pn_gram(20, table)


@pytest.fixture(scope="session")
def sobolev(table, charlier):
    return build_Sn(20, table, charlier[1])


@pytest.fixture(scope="session")
def fam80(params, policy):
    return build_families(params, 80, policy)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line, then assert it."""

    def record(label, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
