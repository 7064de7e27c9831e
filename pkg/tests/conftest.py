import pytest

from polyrmf.poly import IntPolynomial
from polyrmf.sieve import sieve_values


@pytest.fixture(scope="session")
def x2p1():
    return IntPolynomial((1, 0, 1))


@pytest.fixture(scope="session")
def table_60(x2p1):
    return sieve_values(x2p1, 60)


@pytest.fixture(scope="session")
def table_1e3(x2p1):
    return sieve_values(x2p1, 1000)
