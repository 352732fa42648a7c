import pytest

from fourbody import MassVector, solve_all, solve_kite


@pytest.fixture(scope="session")
def solve_general():
    """All configurations for the general golden mass set."""
    return solve_all(MassVector(10, 13, 15, 17))


@pytest.fixture(scope="session")
def solve_general_swapped():
    """Same masses with positions 2 and 3 exchanged."""
    return solve_all(MassVector(10, 15, 13, 17))


@pytest.fixture(scope="session")
def solve_equal_pair():
    return solve_all(MassVector(8, 10, 9, 9))


@pytest.fixture(scope="session")
def solve_equal_pair_relabeled():
    """Equal-pair masses in the ordering the golden tables use."""
    return solve_all(MassVector(10, 8, 9, 9))


@pytest.fixture(scope="session")
def kite_equal_pair():
    return solve_kite(MassVector(8, 10, 9, 9))


@pytest.fixture(scope="session")
def kite_relabeled():
    return solve_kite(MassVector(10, 8, 9, 9))


@pytest.fixture(scope="session")
def kite_unit():
    return solve_kite(MassVector(1, 1, 1, 1))
