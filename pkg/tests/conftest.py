import pytest

from sheafdual.lattice import boolean_lattice, build_blo, build_lattice, chain


def diamond():
    """M3: 0 < a, b, c < 1."""
    leq = [[i == j or i == 0 or j == 4 for j in range(5)] for i in range(5)]
    return build_lattice(leq, ["0", "a", "b", "c", "1"])


def pentagon():
    """N5: 0 < a < c < 1 and 0 < b < 1."""
    rel = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (3, 4)}
    leq = [[i == j or (i, j) in rel for j in range(5)] for i in range(5)]
    return build_lattice(leq, ["0", "a", "b", "c", "1"])


@pytest.fixture
def c2():
    return chain(2)


@pytest.fixture
def c3():
    return chain(3, ["0", "m", "1"])


@pytest.fixture
def b4():
    return boolean_lattice(2)


@pytest.fixture
def b4_blo():
    """B4 with f(a)=1, f(b)=b, and the identity as a second operator."""
    B = boolean_lattice(2)
    return build_blo(B, [[0, 3, 2, 3], [0, 1, 2, 3]])
