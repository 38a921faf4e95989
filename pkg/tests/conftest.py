import pytest

from posetmine import load_fixture, negative_encode


@pytest.fixture(scope="session")
def table1():
    return load_fixture(1)


@pytest.fixture(scope="session")
def table2():
    return load_fixture(2)


@pytest.fixture(scope="session")
def table3():
    return load_fixture(3)


@pytest.fixture(scope="session")
def table4():
    return load_fixture(4)


@pytest.fixture(scope="session")
def table1_negative(table1):
    return negative_encode(table1)

