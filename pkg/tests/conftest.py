import pytest

from primetower.arith import build_sieve

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def small_sieve():
    return build_sieve(100_000)


@pytest.fixture(scope="session")
def sieve():
    return build_sieve(1_000_100)


@pytest.fixture(scope="session")
def big_sieve():
    return build_sieve(10_000_100)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
