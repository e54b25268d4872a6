"""
Shared fixtures: rings, bundled definition files and random matrices
"""
import random

import pytest

from algebra.poly import PolynomialRing
from linkage.definitions import load_definitions
from linkage.matlink import PolyMatrix


@pytest.fixture
def rng():
    return random.Random(7)


@pytest.fixture
def ring4():
    """K[x0, x1, x2, x3] over GF(32003)"""
    return PolynomialRing.standard(4, 32003)


@pytest.fixture
def tc_defs():
    """Twisted cubic and the line it is linked to, over one ring"""
    return load_definitions(['TC', 'LINE'])


def random_linear_matrix(ring, size, rng):
    """Square matrix of random linear forms with nonzero determinant"""
    while True:
        rows = [[ring.random_form(1, rng) for _ in range(size)] for _ in range(size)]
        matrix = PolyMatrix(ring, rows, (0,) * size, (1,) * size)
        if matrix.det:
            return matrix
