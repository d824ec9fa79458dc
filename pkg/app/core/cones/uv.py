"""The (u, v) parameters of the index-1 extremal configuration.

They solve

    alpha / ((1 - alpha) u) = -v + 1 / (1 - alpha) = ((1 - alpha) u + alpha) / ((1 - alpha)(1 - v))

Calling the common value V gives u = a / V and v = 1/(1-alpha) - V with
a = alpha / (1 - alpha); substituting into the third expression reduces to
V^3 - a V^2 - a V - a = 0, so V is the positive root of F1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError, OutOfRange
from ..interval import RationalInterval, as_rational
from ..roots import DEFAULT_TOL, RootBracket, G


@dataclass
class UVSolution:
    alpha: Fraction
    V: RootBracket
    u: RationalInterval
    v: RationalInterval
    expressions: tuple[RationalInterval, RationalInterval, RationalInterval]

    @property
    def agree(self) -> bool:
        e1, e2, e3 = self.expressions
        return e1.overlaps(e2) and e2.overlaps(e3) and e1.overlaps(e3)


def solve_uv(alpha, tol=DEFAULT_TOL) -> UVSolution:
    alpha = as_rational(alpha)
    if not Fraction(1, 4) <= alpha < 1:
        raise DomainError(f"solve_uv needs 1/4 <= alpha < 1, got {alpha}")
    V = G(1, alpha, tol)
    if not V.exact and V.sign_lo * V.sign_hi >= 0:
        raise DomainError(f"F1 does not change sign across [{V.lo}, {V.hi}]")
    a = alpha / (1 - alpha)
    Vi = V.interval
    u = Vi.reciprocal() * a
    v = Fraction(1) / (1 - alpha) - Vi
    for name, iv in (("u", u), ("v", v)):
        if not (iv.lo > 0 and iv.hi < 1):
            raise OutOfRange(f"{name} = {iv} is not certified inside (0, 1)")
    e1 = (u * (1 - alpha)).reciprocal() * alpha
    e2 = -v + Fraction(1) / (1 - alpha)
    e3 = (u * (1 - alpha) + alpha) / ((Fraction(1) - v) * (1 - alpha))
    return UVSolution(alpha, V, u, v, (e1, e2, e3))
