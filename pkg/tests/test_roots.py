from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.core.errors import DomainError, NoSignChange
from app.core.roots import (
    G,
    VALIDITY,
    PolynomialCase,
    bisect_root,
    count_positive_roots,
    crossover_points,
    eval_poly,
    in_validity,
    mesh_sign_changes,
    positive_root,
    rational_grid,
    remark2_compare,
    theorem1_bound,
)

TOL = Fraction(1, 10**12)


def validity_grid(case, points=50):
    lo, hi, _ = VALIDITY[PolynomialCase(case)]
    return rational_grid(lo, hi, points, include_ends=False)


@pytest.mark.parametrize("case", ["F1", "F21", "F3"])
def test_boundary_value_at_quarter(case):
    assert eval_poly(case, Fraction(1, 4), 1) == 0


def test_root_at_quarter_is_one():
    bracket = G(1, Fraction(1, 4))
    assert bracket.exact and bracket.lo == 1
    assert G(2, Fraction(1, 4)).contains(1)
    assert G(3, Fraction(1, 4)).contains(1)


def test_tribonacci_constant_at_half():
    bracket = G(1, Fraction(1, 2))
    assert bracket.width <= TOL
    assert bracket.lo <= Fraction("1.8392867553") and bracket.hi >= Fraction("1.8392867551")


def test_seam_at_half():
    half = Fraction(1, 2)
    f21 = positive_root("F21", half, TOL)
    f22 = positive_root("F22", half, TOL)
    assert f21.overlaps(f22)
    assert G(2, half).case is PolynomialCase.F21


@pytest.mark.parametrize("w", [Fraction(3, 10), Fraction(3, 5), Fraction(9, 10)])
def test_ordering(w):
    g1, g2, g3 = (G(k, w, TOL) for k in (1, 2, 3))
    assert g3.below(g2)
    assert g2.below(g1)


@pytest.mark.parametrize("case, w", [(c, w) for c in ("F1", "F21", "F22", "F3") for w in validity_grid(c)])
def test_single_positive_root(case, w):
    assert count_positive_roots(case, w) == 1
    assert positive_root(case, w, Fraction(1, 10**6)).unique


@pytest.mark.slow
def test_one_sign_change_on_the_mesh():
    for w in validity_grid("F21"):
        assert mesh_sign_changes("F21", w) == 1
    assert mesh_sign_changes("F1", Fraction(1, 2)) == 1


@pytest.mark.parametrize("level", [1, 2, 3])
def test_g_strictly_increases(level):
    grid = rational_grid(Fraction(1, 4), Fraction(99, 100), 50)
    brackets = [G(level, w, Fraction(1, 10**9)) for w in grid]
    assert all(a.below(b) for a, b in zip(brackets, brackets[1:]))


def test_g1_grows_near_one():
    assert G(1, Fraction(99, 100)).lo > 10


@pytest.mark.parametrize("case", ["R2A", "R2B"])
def test_variant_families_vanish_at_one_on_the_quarter(case):
    assert eval_poly(case, Fraction(1, 4), 1) == 0


def test_validity_intervals():
    assert in_validity("F21", Fraction(1, 2))
    assert not in_validity("F22", Fraction(1, 3))
    assert not in_validity("F1", Fraction(1, 5))
    with pytest.raises(DomainError):
        positive_root("F21", Fraction(3, 4))
    # the check can be bypassed for plotting outside the interval
    assert positive_root("F21", Fraction(3, 4), Fraction(1, 10**6), check_validity=False).width > 0


@pytest.mark.parametrize("call", [
    lambda: G(4, Fraction(1, 2)),
    lambda: G(1, Fraction(1, 5)),
    lambda: eval_poly("F1", 1, 2),
    lambda: positive_root("F1", Fraction(1, 2), 0),
    lambda: remark2_compare(Fraction(1, 5)),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_bisect_without_sign_change():
    with pytest.raises(NoSignChange):
        bisect_root([Fraction(1), Fraction(0), Fraction(1)], Fraction(0), Fraction(2), TOL)


def test_theorem1_bound():
    assert theorem1_bound(1, Fraction(1, 4)).contains(Fraction(1, 4))
    for w in (Fraction(3, 10), Fraction(7, 10)):
        assert theorem1_bound(1, w).lo >= w


def test_variant_roots_beat_f3_near_one():
    cmp = remark2_compare(Fraction(9, 10))
    assert cmp.improves_on_g3
    assert cmp.best in (PolynomialCase.R2A, PolynomialCase.R2B)
    assert not cmp.errors
    assert Fraction(9, 10) in crossover_points([Fraction(9, 10)])


def test_rational_grid():
    assert rational_grid(0, 1, 5) == [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1]
    assert rational_grid(0, 1, 3, include_ends=False) == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert rational_grid(0, 1, 1) == [0]
    assert rational_grid(0, 1, 0) == []


@given(st.fractions(min_value=Fraction(1, 4), max_value=Fraction(99, 100), max_denominator=1000))
def test_bracket_encloses_a_sign_change(w):
    bracket = positive_root("F1", w, Fraction(1, 10**6))
    assert bracket.width <= Fraction(1, 10**6)
    assert eval_poly("F1", w, bracket.lo) <= 0 <= eval_poly("F1", w, bracket.hi)
