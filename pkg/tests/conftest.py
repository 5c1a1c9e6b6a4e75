"""Shared fixtures: the bundled fans as orbifold instances."""

import pytest

from campana_cli.core._cache import clear_caches
from campana_cli.core.fanfile import load_instance


@pytest.fixture(autouse=True)
def _fresh_caches():
    yield
    clear_caches()


@pytest.fixture
def p1():
    return load_instance("p1")


@pytest.fixture
def p1_squarefull():
    return load_instance("p1", m=[2, 2])


@pytest.fixture
def p2():
    return load_instance("p2")


@pytest.fixture
def p1xp1():
    return load_instance("p1xp1")


@pytest.fixture
def bl1p2():
    return load_instance("bl1p2")


@pytest.fixture
def bl1p2_d3():
    return load_instance("bl1p2_d3")


@pytest.fixture
def bl2p2():
    return load_instance("bl2p2")


@pytest.fixture
def unit_square():
    from campana_cli.polytope.rational import RationalPolytope

    rows = [((-1, 0), 0), ((0, -1), 0), ((1, 0), 1), ((0, 1), 1)]
    return RationalPolytope(2, rows)


@pytest.fixture
def simplex3():
    from campana_cli.polytope.rational import RationalPolytope

    rows = RationalPolytope.nonnegative_orthant(3) + [((1, 1, 1), 1)]
    return RationalPolytope(3, rows)
