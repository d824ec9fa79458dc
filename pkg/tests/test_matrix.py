from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from app.core.cones import builtin_system
from app.core.cones.system import instantiate
from app.core.errors import EmptyInput, NonSquare, Singular
from app.core.matrix import RationalMatrix, det, int_rank, inverse, rank, solve

small_ints = st.integers(min_value=-6, max_value=6)
square3 = st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=3, max_size=3)
square4 = st.lists(st.lists(small_ints, min_size=4, max_size=4), min_size=4, max_size=4)
vector3 = st.lists(small_ints, min_size=3, max_size=3)


def cofactor_det(m):
    """Laplace expansion along the top remaining row, memoised on the columns left."""

    @lru_cache(maxsize=None)
    def expand(cols):
        if not cols:
            return Fraction(1)
        i = m.rows - len(cols)
        total = Fraction(0)
        for p, j in enumerate(cols):
            if m[i, j]:
                total += (-1) ** p * m[i, j] * expand(cols[:p] + cols[p + 1 :])
        return total

    return expand(tuple(range(m.cols)))


def test_determinant_and_rank():
    m = RationalMatrix.from_rows([[2, 1], [1, 1]])
    assert det(m) == 1
    assert rank(m) == 2
    half = RationalMatrix.from_rows([[Fraction(1, 2), 0], [0, Fraction(2, 3)]])
    assert det(half) == Fraction(1, 3)


def test_duplicated_row_is_singular():
    m = RationalMatrix.from_rows([[1, 2, 3], [0, 1, 4], [1, 2, 3]])
    assert det(m) == 0
    assert rank(m) == 2
    with pytest.raises(Singular):
        inverse(m)
    with pytest.raises(Singular):
        solve(m, [1, 2, 3])


def test_non_square():
    m = RationalMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(NonSquare):
        det(m)
    assert rank(m) == 2


def test_solve_and_inverse():
    m = RationalMatrix.from_rows([[2, 0, 1], [1, 3, 0], [0, 1, 1]])
    x = solve(m, [3, 4, 2])
    assert m.apply(x) == (3, 4, 2)
    assert m @ inverse(m) == RationalMatrix.identity(3)


def test_int_rank():
    assert int_rank([(1, 0, 0), (0, 1, 0), (1, 1, 0)]) == 2
    assert int_rank([(1, 2, 3, 4, 5)]) == 1
    with pytest.raises(EmptyInput):
        int_rank([])


@given(square3, square3)
def test_determinant_is_multiplicative(a, b):
    ma, mb = RationalMatrix.from_rows(a), RationalMatrix.from_rows(b)
    assert det(ma @ mb) == det(ma) * det(mb)


@given(square3)
def test_transpose_keeps_determinant(a):
    m = RationalMatrix.from_rows(a)
    assert det(m.transpose()) == det(m)


def test_cone_matrix_determinant_matches_cofactors():
    m = instantiate(builtin_system("ZIS"), Fraction(1, 3), 2)
    assert m.rows == m.cols == 15
    assert det(m) == cofactor_det(m)


@given(square4)
def test_determinant_matches_cofactors(a):
    m = RationalMatrix.from_rows(a)
    assert det(m) == cofactor_det(m)


@given(square3)
def test_full_rank_iff_nonzero_determinant(a):
    assert (int_rank(a) == 3) == (det(RationalMatrix.from_rows(a)) != 0)


@given(square3, vector3)
def test_solution_satisfies_the_system(a, b):
    m = RationalMatrix.from_rows(a)
    assume(det(m) != 0)
    assert m.apply(solve(m, b)) == tuple(b)
    assert inverse(m) @ m == RationalMatrix.identity(3)
