"""Finite-sample estimates of the ordinary and uniform exponents, and the closed-form lower bounds.

psi is a step function, constant on [q_nu, q_(nu+1)), so the liminf/limsup in the
definitions are attained along the record sequence:

    omega     ~ limsup  -log zeta_nu / log q_nu
    omega_hat ~ liminf  -log zeta_nu / log q_(nu+1)

The estimator evaluates both ratios with certified log enclosures over a tail
window of the records.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

from .approx_engine import BestApproxRecord
from .errors import DomainError, TooShort
from .interval import RationalInterval, as_rational
from .numeric import certified_log, log_interval, sqrt_interval

logger = logging.getLogger(__name__)

DEFAULT_TAIL = Fraction(1, 2)
LOG_TOL = Fraction(1, 10**24)


@dataclass
class RatioRow:
    nu: int
    q: int
    zeta_mid: Fraction
    ratio_omega: RationalInterval | None
    ratio_omega_hat: RationalInterval | None


@dataclass
class ExponentEstimate:
    omega_est: Fraction
    omega_hat_est: Fraction
    tail_window: tuple[int, int]
    per_nu_ratios: list[RatioRow] = field(default_factory=list)
    enclosure_width: Fraction = Fraction(0)
    full_omega: Fraction | None = None
    full_omega_hat: Fraction | None = None
    outside_trivial_range: bool = False


def trivial_bounds(n: int) -> tuple[Fraction, Fraction]:
    """Every uniform exponent lies in [1/n, 1]."""
    if n < 1:
        raise DomainError("dimension must be positive")
    return Fraction(1, n), Fraction(1)


def ratio_rows(seq: Sequence[BestApproxRecord]) -> list[RatioRow]:
    rows = []
    for nu, rec in enumerate(seq):
        neg_log_zeta = -log_interval(rec.zeta, LOG_TOL)
        r_omega = None
        if rec.q > 1:
            r_omega = neg_log_zeta / certified_log(rec.q, LOG_TOL)
        r_hat = None
        if nu + 1 < len(seq):
            r_hat = neg_log_zeta / certified_log(seq[nu + 1].q, LOG_TOL)
        rows.append(RatioRow(nu, rec.q, rec.zeta.mid, r_omega, r_hat))
    return rows


def _window_extremes(rows: Sequence[RatioRow]) -> tuple[Fraction | None, Fraction | None, Fraction]:
    omegas = [r.ratio_omega for r in rows if r.ratio_omega is not None]
    hats = [r.ratio_omega_hat for r in rows if r.ratio_omega_hat is not None]
    if not omegas or not hats:
        return None, None, Fraction(0)
    widths = [iv.width for iv in omegas + hats]
    return max(iv.mid for iv in omegas), min(iv.mid for iv in hats), max(widths)


def estimate_exponents(seq: Sequence[BestApproxRecord], tail_fraction=DEFAULT_TAIL, n: int | None = None) -> ExponentEstimate:
    tail_fraction = as_rational(tail_fraction)
    if not 0 < tail_fraction <= 1:
        raise DomainError("tail_fraction must lie in (0, 1]")
    certified = [r for r in seq if r.certified]
    if len(certified) < 3:
        raise TooShort(f"need at least 3 certified records, got {len(certified)}")
    if any(r.zeta.lo <= 0 for r in certified):
        raise DomainError("a record with zero error has no finite exponent ratio")

    rows = ratio_rows(certified)
    start = len(rows) - max(2, ceil(len(rows) * tail_fraction))
    start = max(0, start)
    window = rows[start:]
    omega, hat, width = _window_extremes(window)
    if omega is None or hat is None:
        raise TooShort("tail window holds no usable ratios")
    # same window, so the uniform estimate never exceeds the ordinary one
    hat = min(hat, omega)
    full_omega, full_hat, _ = _window_extremes(rows)

    est = ExponentEstimate(
        omega_est=omega,
        omega_hat_est=hat,
        tail_window=(start, len(rows) - 1),
        per_nu_ratios=rows,
        enclosure_width=width,
        full_omega=full_omega,
        full_omega_hat=full_hat,
    )
    if n is not None:
        lo, hi = trivial_bounds(n)
        est.outside_trivial_range = not lo <= hat <= hi
    logger.debug("exponent estimate: omega=%s omega_hat=%s window=%s", omega, hat, est.tail_window)
    return est


def jarnik_bound(omega_hat) -> Fraction:
    """omega >= omega_hat^2 / (1 - omega_hat), the two-dimensional bound."""
    w = as_rational(omega_hat)
    if not 0 < w < 1:
        raise DomainError(f"jarnik_bound needs 0 < omega_hat < 1, got {w}")
    return w * w / (1 - w)


def dim3_bound(omega_hat, tol=Fraction(1, 10**12)) -> RationalInterval:
    """(w/2) * (a + sqrt(a^2 + 4a)) with a = w/(1-w), the three-dimensional bound."""
    w = as_rational(omega_hat)
    if not Fraction(1, 3) <= w < 1:
        raise DomainError(f"dim3_bound needs 1/3 <= omega_hat < 1, got {w}")
    a = w / (1 - w)
    # scale the root tolerance so the product keeps width <= tol
    root = sqrt_interval(a * a + 4 * a, as_rational(tol) * 2 / w)
    return (root + a) * (w / 2)


def schmidt_summerer_bound(omega_hat, n: int) -> Fraction:
    """(w^2 + (n-2) w) / ((n-1)(1-w)), valid for every n >= 2."""
    w = as_rational(omega_hat)
    if n < 2:
        raise DomainError("schmidt_summerer_bound needs n >= 2")
    if not Fraction(1, n) <= w < 1:
        raise DomainError(f"schmidt_summerer_bound needs 1/{n} <= omega_hat < 1, got {w}")
    return (w * w + (n - 2) * w) / ((n - 1) * (1 - w))
