from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from app.core.approx_engine import BestApproxRecord
from app.core.chains import (
    check_product_relation,
    detect_chains,
    determinant_product,
    estimate_index,
    growth_exponents,
    independent_indices,
    quintuples_independent,
    triple_independent,
    verify_chain,
)
from app.core.errors import IndexOutOfRange, NotSameSubspace, WrongDimension
from app.core.interval import RationalInterval
from app.core.matrix import int_rank

small_vectors = st.tuples(*[st.integers(-3, 3)] * 5)


def unit(i):
    return tuple(int(i == j) for j in range(5))


def test_independent_indices(chain_vectors):
    assert independent_indices(chain_vectors) == [1, 3, 6]
    assert triple_independent(chain_vectors, 1)
    assert not triple_independent(chain_vectors, 2)
    with pytest.raises(IndexOutOfRange):
        triple_independent(chain_vectors, 0)


def test_detects_the_single_chain(chain_vectors):
    chains = detect_chains(chain_vectors)
    assert len(chains) == 1
    c = chains[0]
    assert (c.nu, c.r, c.k) == (1, (3,), 6)
    assert c.n == 1
    assert abs(c.det_vi) == 2
    assert c.indices == (1, 3, 6)


def test_verify_chain_reports_every_condition(chain_vectors):
    c = detect_chains(chain_vectors)[0]
    report = verify_chain(chain_vectors, c)
    assert report.ok
    assert report.failed == []
    assert set(report.conditions) == {"order", "ii", "iii", "iv", "v", "vi"}


def test_broken_chain_fails_verification(chain_vectors):
    c = detect_chains(chain_vectors)[0]
    broken = list(chain_vectors)
    broken[7] = (0, 0, 1, 0, 0)  # z_(k+1) moved into T
    report = verify_chain(broken, c)
    assert not report.ok
    assert "v" in report.failed


def test_max_n_and_dimension(chain_vectors):
    assert detect_chains(chain_vectors, max_n=0) == []
    with pytest.raises(WrongDimension):
        detect_chains([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)])


def test_index_estimate(chain_vectors):
    est = estimate_index(detect_chains(chain_vectors), horizon=6)
    assert est.value == 1
    assert not est.is_infinite
    assert "up to nu=6" in est.label
    assert estimate_index([], horizon=6).is_infinite


def test_product_relation():
    seq = [
        BestApproxRecord(q, (a,), RationalInterval.point(z), True)
        for q, a, z in [(2, 1, Fraction(1, 2)), (3, 2, Fraction(1, 3)), (5, 3, Fraction(1, 5)), (8, 5, Fraction(1, 8))]
    ]
    assert check_product_relation(seq, 1, 2) == RationalInterval.point(1)
    assert check_product_relation(seq, 0, 2) == RationalInterval.point(Fraction(9, 10))


def test_product_relation_needs_one_plane(chain_records):
    with pytest.raises(NotSameSubspace):
        check_product_relation(chain_records, 0, 3)


def test_quintuples():
    e = [tuple(int(i == j) for j in range(5)) for i in range(5)]
    assert quintuples_independent([*e, (1, 1, 1, 1, 1)]) == [1, 2]


def test_determinant_product(chain_vectors, chain_records):
    c = detect_chains(chain_vectors)[0]
    assert determinant_product(chain_records, c) == RationalInterval.point(Fraction(1, 2**17))


def test_vandermonde_chains_have_length_one():
    vs = [tuple(i**p for p in range(5)) for i in range(1, 11)]
    found = detect_chains(vs)
    assert len(found) == len(vs) - 4
    assert all(c.n == 1 for c in found)
    assert all(verify_chain(vs, c).ok for c in found)


def test_two_step_chain():
    e1, e2, e3, e4, e5 = (unit(i) for i in range(5))
    vs = [e1, e2, e3, e4, (0, 1, 1, 1, 0), e5, (1, 0, 0, 0, 1)]
    found = detect_chains(vs)
    assert [(c.nu, c.r, c.k) for c in found] == [(1, (2, 3), 4), (3, (4,), 5)]
    assert found[0].n == 2
    assert estimate_index(found, horizon=5).value == 1
    assert all(verify_chain(vs, c).ok for c in found)


@given(st.lists(st.tuples(small_vectors, small_vectors), min_size=4, max_size=4))
def test_detected_chains_verify(pairs):
    # every third vector is the sum of the two before it
    vs = []
    for u, v in pairs:
        vs += [u, v, tuple(x + y for x, y in zip(u, v))]
    for c in detect_chains(vs):
        assert verify_chain(vs, c).ok
        assert c.det_vi != 0


@given(small_vectors, small_vectors, small_vectors, st.booleans(), st.integers(-2, 2), st.integers(-2, 2))
def test_rank_two_triple_means_one_plane(u, v, w, in_plane, a, b):
    if in_plane:
        w = tuple(a * x + b * y for x, y in zip(u, v))
    assume(int_rank([u, v]) == 2 and int_rank([v, w]) == 2)
    same_plane = sympy.Matrix([u, v]).rref()[0] == sympy.Matrix([v, w]).rref()[0]
    assert same_plane == (int_rank([u, v, w]) == 2)


def test_growth_exponents(chain_vectors):
    c = detect_chains(chain_vectors)[0]
    records = [
        BestApproxRecord(2 ** (i + 1), v[1:], RationalInterval.point(Fraction(1, 2 ** (i + 1))), True)
        for i, v in enumerate(chain_vectors)
    ]
    growth = growth_exponents(records, c)
    assert sorted(growth) == [1, 3, 6]
    assert growth[1].contains(Fraction(3, 2))
    assert growth[3].contains(Fraction(5, 4))
    assert growth[6].contains(Fraction(8, 7))
