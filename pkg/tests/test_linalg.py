from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cryvol.linalg import Infeasible, maximize, rank, support

small_int = st.integers(-3, 3)


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_matches_numpy_on_small_integer_matrices(rows, cols, data):
    A = [[data.draw(small_int) for _ in range(cols)] for _ in range(rows)]
    assert rank(A) == np.linalg.matrix_rank(np.array(A, dtype=float))


def test_rank_edge_cases():
    assert rank([]) == 0
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([[1, 2], [2, 4]]) == 1


def test_maximize_simple():
    # max x + y subject to x + 2y = 4, x, y >= 0
    value, x = maximize([1, 1], [[1, 2]], [4])
    assert value == 4 and x == [Fraction(4), Fraction(0)]


def test_maximize_infeasible():
    with pytest.raises(Infeasible):
        maximize([1], [[1], [1]], [1, 2])


def test_support_finds_forced_zero():
    # x0 + x1 = 1 and x1 + x2 = 0 force x1 = x2 = 0
    assert support([[1, 1, 0], [0, 1, 1]], [1, 0]) == {0}
