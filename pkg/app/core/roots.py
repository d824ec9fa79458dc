"""The polynomial families in omega_hat and their certified positive roots.

Coefficients are exact rationals in the parameter w = omega_hat, with
a = w / (1 - w). The two variant families whose printed form mixes x into the
constant term are stored expanded to monomials.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import sympy

from .errors import DomainError, NoSignChange, NotUnique
from .interval import RationalInterval, as_rational

logger = logging.getLogger(__name__)

DEFAULT_TOL = Fraction(1, 10**12)
QUARTER, HALF, ONE = Fraction(1, 4), Fraction(1, 2), Fraction(1)


class PolynomialCase(str, Enum):
    F1 = "F1"
    F21 = "F21"
    F22 = "F22"
    F3 = "F3"
    R2A = "R2A"
    R2B = "R2B"


# (lo, hi, hi_inclusive); lo is always inclusive
VALIDITY: dict[PolynomialCase, tuple[Fraction, Fraction, bool]] = {
    PolynomialCase.F1: (QUARTER, ONE, False),
    PolynomialCase.F21: (QUARTER, HALF, True),
    PolynomialCase.F22: (HALF, ONE, False),
    PolynomialCase.F3: (QUARTER, ONE, False),
    PolynomialCase.R2A: (QUARTER, ONE, False),
    PolynomialCase.R2B: (QUARTER, ONE, False),
}

# families with exactly one positive root on their validity interval
UNIQUE_ROOT_CASES = frozenset({PolynomialCase.F1, PolynomialCase.F21, PolynomialCase.F22, PolynomialCase.F3})


def _check_parameter(w: Fraction) -> None:
    if not 0 < w < 1:
        raise DomainError(f"omega_hat must lie in (0, 1), got {w}")


def in_validity(case: PolynomialCase, w) -> bool:
    lo, hi, closed = VALIDITY[PolynomialCase(case)]
    w = as_rational(w)
    return lo <= w and (w <= hi if closed else w < hi)


def coefficients(case: PolynomialCase, omega_hat) -> list[Fraction]:
    """Coefficients from the leading term down to the constant."""
    w = as_rational(omega_hat)
    _check_parameter(w)
    a = w / (1 - w)
    b = w / (1 - w) ** 2
    case = PolynomialCase(case)
    if case is PolynomialCase.F1:
        return [ONE, -a, -a, -a]
    if case is PolynomialCase.F21:
        return [ONE, -a, -a, a * a, -b]
    if case is PolynomialCase.F22:
        return [ONE, -a, -a, a, -b]
    if case is PolynomialCase.F3:
        return [ONE, -a, -a, a * a, Fraction(0), -b]
    if case is PolynomialCase.R2A:
        # - w (1 - x w)^2 / (1 - w)^3 = -c + 2 c w x - c w^2 x^2
        c = w / (1 - w) ** 3
        return [ONE, -a, -a, -c * w * w, 2 * c * w, -c]
    # R2B: - w (1 - x w)(2 - x) / (1 - w)^2 = -b (w x^2 - (1 + 2w) x + 2)
    return [ONE, -a, -a, -b * w, b * (1 + 2 * w), -2 * b]


def horner(coeffs: Sequence[Fraction], x) -> Fraction:
    x = as_rational(x)
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def eval_poly(case: PolynomialCase, omega_hat, x) -> Fraction:
    return horner(coefficients(case, omega_hat), x)


def cauchy_bound(coeffs: Sequence[Fraction]) -> Fraction:
    lead = abs(coeffs[0])
    return 1 + sum(abs(c) for c in coeffs[1:]) / lead


@dataclass(frozen=True)
class RootBracket:
    lo: Fraction
    hi: Fraction
    case: PolynomialCase
    omega_hat: Fraction
    sign_lo: int = -1
    sign_hi: int = 1
    # distinct roots in (0, B] by Sturm count
    positive_roots: int | None = None

    @property
    def interval(self) -> RationalInterval:
        return RationalInterval(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def unique(self) -> bool:
        return self.positive_roots == 1

    def contains(self, x) -> bool:
        return self.lo <= as_rational(x) <= self.hi

    def overlaps(self, other: RootBracket | RationalInterval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def below(self, other: RootBracket) -> bool:
        """Certified strict comparison of the two roots."""
        return self.hi < other.lo


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def bisect_root(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction, tol: Fraction) -> tuple[Fraction, Fraction, int, int]:
    """Exact-sign bisection; returns (lo, hi, sign(f(lo)), sign(f(hi)))."""
    s_lo, s_hi = _sign(horner(coeffs, lo)), _sign(horner(coeffs, hi))
    if s_lo == 0:
        return lo, lo, 0, 0
    if s_hi == 0:
        return hi, hi, 0, 0
    if s_lo == s_hi:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s_mid = _sign(horner(coeffs, mid))
        if s_mid == 0:
            return mid, mid, 0, 0
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi, s_lo, s_hi


def positive_root(case: PolynomialCase, omega_hat, tol=DEFAULT_TOL, check_validity: bool = True) -> RootBracket:
    """Bisection bracket of the positive root, with the Sturm count of roots in (0, B].

    The four families with a single positive root raise NotUnique when the count
    says otherwise; the variant families only record it.
    """
    case = PolynomialCase(case)
    w, tol = as_rational(omega_hat), as_rational(tol)
    _check_parameter(w)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    if check_validity and not in_validity(case, w):
        raise DomainError(f"{case.value} root is only defined on its validity interval, got omega_hat={w}")
    coeffs = coefficients(case, w)
    lo, hi, s_lo, s_hi = bisect_root(coeffs, Fraction(0), cauchy_bound(coeffs), tol)
    count = count_positive_roots(case, w)
    if count != 1 and check_validity and case in UNIQUE_ROOT_CASES:
        raise NotUnique(f"{case.value} has {count} positive roots at omega_hat={w}")
    return RootBracket(lo, hi, case, w, s_lo, s_hi, count)


def count_positive_roots(case: PolynomialCase, omega_hat) -> int:
    """Exact number of distinct roots in (0, B] via a Sturm sequence over Q."""
    coeffs = coefficients(case, omega_hat)
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain=sympy.QQ)
    B = cauchy_bound(coeffs)
    total = poly.count_roots(0, sympy.Rational(B.numerator, B.denominator))
    return total - (1 if coeffs[-1] == 0 else 0)


def mesh_sign_changes(case: PolynomialCase, omega_hat, step=Fraction(1, 1000), upper=None) -> int:
    """Sign changes of f on the mesh step, 2 step, ..., up to the root bound (or ``upper``)."""
    coeffs = coefficients(case, omega_hat)
    step = as_rational(step)
    top = as_rational(upper) if upper is not None else cauchy_bound(coeffs)
    changes, prev = 0, _sign(coeffs[-1])
    x = step
    while x <= top:
        s = _sign(horner(coeffs, x))
        if s != 0 and prev != 0 and s != prev:
            changes += 1
        if s != 0:
            prev = s
        x += step
    return changes


def G(level: int, omega_hat, tol=DEFAULT_TOL, branch: PolynomialCase | None = None) -> RootBracket:
    w = as_rational(omega_hat)
    if not QUARTER <= w < ONE:
        raise DomainError(f"G needs 1/4 <= omega_hat < 1, got {w}")
    if level == 1:
        return positive_root(PolynomialCase.F1, w, tol)
    if level == 2:
        if branch is None:
            branch = PolynomialCase.F21 if w <= HALF else PolynomialCase.F22
        return positive_root(branch, w, tol)
    if level == 3:
        return positive_root(PolynomialCase.F3, w, tol)
    raise DomainError(f"G level must be 1, 2 or 3, got {level}")


def theorem1_bound(index: int, omega_hat, tol=DEFAULT_TOL) -> RationalInterval:
    """omega_hat * G_index(omega_hat), the lower bound for omega under index 1, 2 or 3."""
    w = as_rational(omega_hat)
    bracket = G(index, w, tol)
    return bracket.interval * w


@dataclass
class Remark2Comparison:
    omega_hat: Fraction
    g3: RootBracket | None
    g_r2a: RootBracket | None
    g_r2b: RootBracket | None
    best: PolynomialCase | None
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def improves_on_g3(self) -> bool:
        """Some variant root is certified strictly above the F3 root."""
        if self.g3 is None:
            return False
        return any(b is not None and self.g3.below(b) for b in (self.g_r2a, self.g_r2b))


def remark2_compare(omega_hat, tol=DEFAULT_TOL) -> Remark2Comparison:
    w = as_rational(omega_hat)
    if not QUARTER <= w < ONE:
        raise DomainError(f"remark2_compare needs 1/4 <= omega_hat < 1, got {w}")
    found: dict[PolynomialCase, RootBracket | None] = {}
    errors: dict[str, str] = {}
    for case in (PolynomialCase.F3, PolynomialCase.R2A, PolynomialCase.R2B):
        try:
            found[case] = positive_root(case, w, tol)
        except NoSignChange as exc:
            logger.warning("no root for %s at omega_hat=%s: %s", case.value, w, exc)
            found[case], errors[case.value] = None, str(exc)
    present = [(b.lo, case) for case, b in found.items() if b is not None]
    best = max(present, key=lambda t: t[0])[1] if present else None
    return Remark2Comparison(w, found[PolynomialCase.F3], found[PolynomialCase.R2A], found[PolynomialCase.R2B], best, errors)


def crossover_points(grid: Sequence, tol=DEFAULT_TOL) -> list[Fraction]:
    """Grid points where a variant root is certified above the F3 root."""
    return [as_rational(w) for w in grid if remark2_compare(w, tol).improves_on_g3]


def rational_grid(lo, hi, steps: int, include_ends: bool = True) -> list[Fraction]:
    """``steps`` evenly spaced rationals from lo to hi (or strictly inside when include_ends is False)."""
    lo, hi = as_rational(lo), as_rational(hi)
    if steps <= 0:
        return []
    if include_ends:
        if steps == 1:
            return [lo]
        return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    return [lo + (hi - lo) * i / (steps + 1) for i in range(1, steps + 1)]
