"""Certified elementary functions on rationals, integer arithmetic only."""
from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, isqrt

from .errors import DomainError
from .interval import RationalInterval, as_rational


def decimal_str(x, digits: int = 12) -> str:
    """Decimal rendering of an exact rational, truncated toward zero to ``digits`` places."""
    x = as_rational(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = x.numerator * 10**digits // x.denominator
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def parse_decimal(text: str) -> Fraction:
    """Exact value of a decimal or p/q string; scientific notation allowed ("1e-9")."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not an exact number: {text!r}") from exc


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0 by integer Newton iteration."""
    if n < 0 or k < 1:
        raise DomainError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def rational_root_interval(r, k: int, digits: int) -> RationalInterval:
    """Enclosure of r**(1/k) of width <= 10**-digits, exact when the root is rational."""
    r = as_rational(r)
    if r < 0:
        raise DomainError("root of a negative number")
    p, q = r.numerator, r.denominator
    scale = 10**digits
    # r^(1/k) * scale = (p * q^(k-1) * scale^k)^(1/k) / q
    n = p * q ** (k - 1) * scale**k
    lo = iroot(n, k)
    if lo**k == n:
        return RationalInterval.point(Fraction(lo, q * scale))
    return RationalInterval(Fraction(lo, q * scale), Fraction(lo + 1, q * scale))


def sqrt_interval(x, tol) -> RationalInterval:
    x, tol = as_rational(x), as_rational(tol)
    if x < 0:
        raise DomainError("square root of a negative number")
    digits = 0
    while Fraction(1, 10**digits) > tol:
        digits += 1
    return rational_root_interval(x, 2, digits)


def _atanh_series(t: Fraction, terms: int) -> Fraction:
    total, power, t2 = Fraction(0), t, t * t
    for k in range(terms):
        total += power / (2 * k + 1)
        power *= t2
    return total


def _atanh_tail(t: Fraction, terms: int) -> Fraction:
    # sum_{k>=terms} t^(2k+1)/(2k+1) <= t^(2 terms+1) / ((2 terms+1)(1-t^2))
    return t ** (2 * terms + 1) / ((2 * terms + 1) * (1 - t * t))


def _log_near_one(y: Fraction, tol: Fraction) -> RationalInterval:
    """log(y) for y in [1, 2] as 2*atanh((y-1)/(y+1)), series plus remainder bound."""
    t = (y - 1) / (y + 1)
    if t == 0:
        return RationalInterval.point(0)
    terms = 1
    while 2 * _atanh_tail(t, terms) > tol:
        terms += 1
    s = 2 * _atanh_series(t, terms)
    return RationalInterval(s, s + 2 * _atanh_tail(t, terms))


def _round_out(iv: RationalInterval, bits: int) -> RationalInterval:
    scale = 1 << bits
    return RationalInterval(Fraction(floor(iv.lo * scale), scale), Fraction(ceil(iv.hi * scale), scale))


def log2_interval(tol) -> RationalInterval:
    return _log_near_one(Fraction(2), as_rational(tol))


def certified_log(x, tol=Fraction(1, 10**20)) -> RationalInterval:
    """Enclosure of log(x) with width at most ~tol.

    x is reduced to y = x / 2**e in [1, 2); y is rounded outward to a dyadic
    grid so the series runs on small denominators; log is monotone so the
    rounded endpoints still bracket the value.
    """
    x, tol = as_rational(x), as_rational(tol)
    if x <= 0:
        raise DomainError(f"log of a non-positive number: {x}")
    if x == 1:
        return RationalInterval.point(0)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** e
    if y < 1:
        e -= 1
        y *= 2
    elif y >= 2:
        e += 1
        y /= 2
    bits = max(8, (1 / tol).numerator.bit_length() + 8)
    scale = 1 << bits
    y_lo = Fraction(floor(y * scale), scale)
    y_hi = Fraction(ceil(y * scale), scale)
    part_tol = tol / 4
    log_y = RationalInterval(_log_near_one(y_lo, part_tol).lo, _log_near_one(y_hi, part_tol).hi)
    log_two = log2_interval(part_tol / (abs(e) + 1))
    return _round_out(log_two * e + log_y, bits)


def log_interval(iv: RationalInterval, tol=Fraction(1, 10**20)) -> RationalInterval:
    """log over an interval of positive rationals (monotone)."""
    if iv.lo <= 0:
        raise DomainError("log of an interval reaching 0")
    return RationalInterval(certified_log(iv.lo, tol).lo, certified_log(iv.hi, tol).hi)
