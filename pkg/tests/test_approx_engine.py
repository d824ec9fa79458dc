import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.adapters.files.targets import load_target, parse_component
from app.core.approx_engine import (
    BestApproxRecord,
    TargetVector,
    best_approx_sequence,
    generate_power_basis,
    psi,
    target_from_rationals,
    uniform_witness,
)
from app.core.errors import DomainError, ExactHit, PerfectPower, WrongDimension
from app.core.interval import RationalInterval, dist_to_int


def naive_records(values, Q):
    out, best = [], None
    for q in range(1, Q + 1):
        err = max(dist_to_int(q * v) for v in values)
        if best is None or err < best:
            out.append((q, err))
            best = err
    return out


def test_golden_ratio_gives_fibonacci_denominators(golden_path):
    result = best_approx_sequence(load_target(golden_path), 100)
    assert [r.q for r in result.records] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]
    assert [r.a for r in result.records][:4] == [(1,), (1,), (2,), (3,)]
    assert result.uncertain == []
    assert all(r.certified for r in result.records)


def test_errors_strictly_decrease(golden_path):
    records = best_approx_sequence(load_target(golden_path), 5000).records
    assert all(a.zeta.lo > b.zeta.hi for a, b in zip(records, records[1:]))


def test_exact_hit_carries_truncated_records():
    with pytest.raises(ExactHit) as info:
        best_approx_sequence(target_from_rationals([Fraction(3, 7)]), 100)
    assert info.value.q == 7
    assert [r.q for r in info.value.records] == [1, 2, 7]


def test_q_must_be_positive(golden_path):
    with pytest.raises(DomainError):
        best_approx_sequence(load_target(golden_path), 0)


def test_matches_naive_scan_on_rational_targets():
    rng = random.Random(0)
    for _ in range(5):
        values = [Fraction(rng.randrange(10**30), 10**30) for _ in range(3)]
        got = best_approx_sequence(target_from_rationals(values, precision=30), 400).records
        assert [(r.q, r.zeta.lo) for r in got] == naive_records(values, 400)



def test_matches_naive_scan_in_four_dimensions():
    rng = random.Random(4)
    for _ in range(3):
        values = [Fraction(rng.randrange(10**30), 10**30) for _ in range(4)]
        got = best_approx_sequence(target_from_rationals(values, precision=30), 200).records
        assert [(r.q, r.zeta.lo) for r in got] == naive_records(values, 200)


def test_records_improve_on_every_smaller_denominator(golden_path):
    theta = load_target(golden_path)
    for r in best_approx_sequence(theta, 1000).records[1:]:
        assert psi(theta, r.q - 1).lo > r.zeta.hi
        assert psi(theta, r.q) == r.zeta


def test_coarse_target_defers_to_finer_precision(golden_path):
    fine_theta = load_target(golden_path)
    text = "0.6180339887498948482045868343656381177203"
    coarse_theta = TargetVector((parse_component(text[:8], 6),), 6, "golden-coarse")
    fine = best_approx_sequence(fine_theta, 5000)
    coarse = best_approx_sequence(coarse_theta, 5000)
    fine_qs = [r.q for r in fine.records]
    coarse_qs = [r.q for r in coarse.records]
    assert set(coarse_qs) <= set(fine_qs)
    assert set(fine_qs) <= set(coarse_qs) | set(coarse.uncertain)
    assert coarse.uncertain

@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=10**6), min_size=1, max_size=3))
def test_records_are_best_approximations(values):
    Q = 60
    try:
        got = best_approx_sequence(target_from_rationals(values), Q).records
    except ExactHit as exc:
        got = exc.records
        Q = exc.q
    expected = [q for q, _ in naive_records(values, Q)]
    assert [r.q for r in got] == expected


def test_parallel_scan_matches_sequential(golden_path):
    theta = load_target(golden_path)
    one = best_approx_sequence(theta, 3000)
    many = best_approx_sequence(theta, 3000, workers=3)
    assert [(r.q, r.zeta) for r in one.records] == [(r.q, r.zeta) for r in many.records]


def test_power_basis():
    theta = generate_power_basis(2, 5, 4, 30)
    assert theta.n == 4
    assert all(c.width <= Fraction(1, 10**30) for c in theta.components)
    c = theta.components[0]
    assert (1 + c.lo) ** 5 <= 2 <= (1 + c.hi) ** 5
    with pytest.raises(PerfectPower):
        generate_power_basis(32, 5, 4, 30)
    with pytest.raises(DomainError):
        generate_power_basis(2, 1, 4, 30)


def test_dimension_limits():
    with pytest.raises(WrongDimension):
        target_from_rationals([])


def test_psi_is_exact_for_rationals():
    theta = target_from_rationals([Fraction(3, 7)])
    assert psi(theta, 1) == RationalInterval.point(Fraction(3, 7))
    assert psi(theta, 6) == RationalInterval.point(Fraction(1, 7))


def test_uniform_witness():
    records = [
        BestApproxRecord(q, (0,), RationalInterval.point(z), True)
        for q, z in [(1, Fraction(1, 2)), (2, Fraction(1, 3)), (4, Fraction(1, 16)), (16, Fraction(1, 64)), (64, 0)]
    ]
    assert uniform_witness(records, 1) == 2
    assert uniform_witness(records, Fraction(1, 2)) == 0
    assert uniform_witness(records, 2) is None
