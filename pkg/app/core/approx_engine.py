"""Certified best simultaneous approximations by exhaustive scan.

The target components are intervals; every comparison between errors is
decided on interval endpoints, and a denominator whose comparison cannot be
decided at the declared precision is reported as uncertain instead of guessed.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, lcm
from typing import Sequence

from .errors import DomainError, ExactHit, PerfectPower, WrongDimension
from .interval import RationalInterval, as_rational, nearest_int
from .numeric import iroot, rational_root_interval

logger = logging.getLogger(__name__)

MAX_DIMENSION = 8


@dataclass(frozen=True)
class TargetVector:
    components: tuple[RationalInterval, ...]
    precision: int
    label: str = ""

    def __post_init__(self):
        if not 1 <= len(self.components) <= MAX_DIMENSION:
            raise WrongDimension(f"target dimension must be in 1..{MAX_DIMENSION}, got {len(self.components)}")
        limit = Fraction(1, 10**self.precision)
        for j, c in enumerate(self.components):
            if c.width > limit:
                raise DomainError(f"component {j + 1} is wider than 10^-{self.precision}")
        # best approximations are invariant under integer shifts of the components
        object.__setattr__(self, "components", tuple(c.frac_shift()[1] for c in self.components))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def is_exact(self) -> bool:
        return all(c.is_point for c in self.components)


@dataclass(frozen=True)
class BestApproxRecord:
    q: int
    a: tuple[int, ...]
    zeta: RationalInterval
    certified: bool = True

    @property
    def vector(self) -> tuple[int, ...]:
        """z = (q, a_1, ..., a_n) in Z^(n+1)."""
        return (self.q, *self.a)


@dataclass
class ApproxResult:
    records: list[BestApproxRecord]
    uncertain: list[int] = field(default_factory=list)
    Q: int = 0


def target_from_rationals(values: Sequence, label: str = "", precision: int = 0) -> TargetVector:
    return TargetVector(tuple(RationalInterval.point(as_rational(v)) for v in values), precision, label)


def _is_perfect_power(x: Fraction, k: int) -> bool:
    return all(iroot(v, k) ** k == v for v in (x.numerator, x.denominator))


def generate_power_basis(r, k: int, n: int, d: int, label: str | None = None) -> TargetVector:
    """(r^(1/k), r^(2/k), ..., r^(n/k)) mod 1, each component certified to d digits."""
    r = as_rational(r)
    if r <= 0:
        raise DomainError("power basis needs r > 0")
    if k < 2:
        raise DomainError("power basis needs root degree k >= 2")
    if _is_perfect_power(r, k):
        raise PerfectPower(f"{r} is a perfect {k}-th power")
    comps = tuple(rational_root_interval(r**i, k, d) for i in range(1, n + 1))
    return TargetVector(comps, d, label or f"{r}^(i/{k}), i=1..{n}")


# --- integer kernel ---------------------------------------------------------

def _scaled(theta: TargetVector) -> tuple[int, list[int], list[int]]:
    """Common denominator D and numerators so that component j is [L_j/D, H_j/D]."""
    D = lcm(*(c.lo.denominator for c in theta.components), *(c.hi.denominator for c in theta.components))
    lows = [int(c.lo * D) for c in theta.components]
    highs = [int(c.hi * D) for c in theta.components]
    return D, lows, highs


def _dist_range(x1: int, x2: int, D: int) -> tuple[int, int]:
    """Numerators over D of the exact range of ||t|| for t in [x1/D, x2/D]."""
    r1, r2 = x1 % D, x2 % D
    d1, d2 = min(r1, D - r1), min(r2, D - r2)
    has_int = x2 // D >= -((-x1) // D)
    # half-integers are the odd multiples of D/2; work with 2x over 2D
    y1, y2 = 2 * x1 - D, 2 * x2 - D
    has_half = y2 // (2 * D) >= -((-y1) // (2 * D))
    lo = 0 if has_int else min(d1, d2)
    if has_half:
        # 2 * hi = D, keep numerators over 2D consistent by returning doubled values
        return 2 * lo, D
    return 2 * lo, 2 * max(d1, d2)


def _error_at(q: int, D: int, lows: list[int], highs: list[int]) -> tuple[int, int]:
    """max_j ||q theta_j|| as numerators over 2D."""
    lo = hi = 0
    for L, H in zip(lows, highs):
        a, b = _dist_range(q * L, q * H, D)
        lo, hi = max(lo, a), max(hi, b)
    return lo, hi


def _scan_chunk(D: int, lows: list[int], highs: list[int], q_start: int, q_stop: int) -> list[tuple[int, int, int]]:
    """Local candidates of [q_start, q_stop): every q not ruled out against the chunk's own running minimum."""
    out = []
    m_hi = None
    for q in range(q_start, q_stop):
        lo, hi = _error_at(q, D, lows, highs)
        if m_hi is None or lo < m_hi:
            out.append((q, lo, hi))
            m_hi = hi if m_hi is None else min(m_hi, hi)
    return out


def _chunks(Q: int, workers: int) -> list[tuple[int, int]]:
    size = ceil(Q / workers)
    return [(s, min(s + size, Q + 1)) for s in range(1, Q + 1, size)]


def best_approx_sequence(theta: TargetVector, Q: int, workers: int = 1) -> ApproxResult:
    """All certified best approximations with q <= Q.

    Raises ExactHit (carrying the truncated records) when a certified error is
    exactly zero.
    """
    if Q < 1:
        raise DomainError("Q must be >= 1")
    D, lows, highs = _scaled(theta)
    spans = _chunks(Q, max(1, workers))
    if workers > 1 and len(spans) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, *zip(*[(D, lows, highs, a, b) for a, b in spans])))
    else:
        parts = [_scan_chunk(D, lows, highs, a, b) for a, b in spans]

    two_d = 2 * D
    records: list[BestApproxRecord] = []
    uncertain: list[int] = []
    m_lo = m_hi = None
    for part in parts:
        for q, lo, hi in part:
            if m_lo is None or hi < m_lo:
                zeta = RationalInterval(Fraction(lo, two_d), Fraction(hi, two_d))
                a = tuple(nearest_int(q * c.mid) for c in theta.components)
                records.append(BestApproxRecord(q, a, zeta, True))
                if hi == 0:
                    logger.warning("exact hit at q=%d for %s", q, theta.label)
                    raise ExactHit(q, records)
            elif lo < m_hi:
                uncertain.append(q)
            if m_lo is None:
                m_lo, m_hi = lo, hi
            else:
                m_lo, m_hi = min(m_lo, lo), min(m_hi, hi)
    logger.info("scan of %s up to Q=%d: %d records, %d uncertain", theta.label or "target", Q, len(records), len(uncertain))
    return ApproxResult(records, uncertain, Q)


def psi(theta: TargetVector, t: int) -> RationalInterval:
    """Enclosure of psi(t) = min_{q <= t} max_j ||q theta_j||."""
    if t < 1:
        raise DomainError("psi needs t >= 1")
    D, lows, highs = _scaled(theta)
    lo = hi = None
    for q in range(1, t + 1):
        a, b = _error_at(q, D, lows, highs)
        lo = a if lo is None else min(lo, a)
        hi = b if hi is None else min(hi, b)
    return RationalInterval(Fraction(lo, 2 * D), Fraction(hi, 2 * D))


def uniform_witness(records: Sequence[BestApproxRecord], alpha) -> int | None:
    """First index nu0 such that zeta_nu <= q_(nu+1)^(-alpha) for every nu >= nu0 in the list.

    The comparison zeta^den <= q^(-num) is exact for rational alpha = num/den.
    Returns None when the last comparable index already fails.
    """
    alpha = as_rational(alpha)
    num, den = alpha.numerator, alpha.denominator
    witness = None
    for nu in range(len(records) - 2, -1, -1):
        zeta_hi = records[nu].zeta.hi
        bound = Fraction(1, records[nu + 1].q ** num) if num >= 0 else Fraction(records[nu + 1].q ** (-num))
        if zeta_hi**den <= bound:
            witness = nu
        else:
            break
    return witness
