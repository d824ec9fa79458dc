"""Certified feasibility of "simplicial cone meets hyperplane" and the critical growth value.

For a nonsingular instantiated matrix M the cone {X : M X >= 0} is simplicial and
its extreme rays are the columns of M^-1. Writing the hyperplane form as
L = sum_i y_i row_i (so M^T y = L) gives L(ray_i) = y_i, which makes the sign
pattern of y a complete feasibility certificate:

* some y_i = 0          -> ray i lies on the hyperplane
* y has both signs      -> a positive combination of two rays does
* y uniformly signed    -> L is nonzero on every nonzero cone point

The critical growth value is located on the all-tight configuration instead:
restore the eliminated coordinate at one, make every row an equality and ask on
which side of the hyperplane the resulting vertex lies. For the shipped systems
det [[M, anchor], [L, 0]] is a constant multiple of the matching
polynomial, so its sign change is the critical g.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from ..errors import DiophantError, DomainError, NoCriticalValue, NonMonotone, NonSquare, Singular
from ..interval import RationalInterval, as_rational
from ..matrix import RationalMatrix, det, inverse, solve
from ..roots import VALIDITY, PolynomialCase, RootBracket, cauchy_bound, coefficients, horner, in_validity, positive_root
from .builtin import augmentation_rows, builtin_system, complete_zis3, zis3_augmentation_pool
from .system import ConeSystem, SystemCase, alpha_slice, check_parameters, instantiate

logger = logging.getLogger(__name__)

DEFAULT_MESH = 64
DEFAULT_TOL = Fraction(1, 10**9)
BELOW_OFFSET = Fraction(1, 1000)
CUSTOM_G_MAX = Fraction(16)

MATCHING_POLYNOMIAL = {
    SystemCase.ZIS: PolynomialCase.F21,
    SystemCase.ZIS2: PolynomialCase.F22,
    SystemCase.ZIS3: PolynomialCase.F3,
}


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    scale = lcm(*(x.denominator for x in v))
    ints = [int(x * scale) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


@dataclass
class RaySet:
    rays: list[tuple[int, ...]]
    source: RationalMatrix
    active_rows: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rays)


@dataclass
class FeasibilityCertificate:
    """``values[i]`` has the sign of L on ray i; ``witness`` names the ray(s) that prove feasibility."""

    feasible: bool
    kind: str
    values: tuple[Fraction, ...]
    witness: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "kind": self.kind,
            "values": [str(v) for v in self.values],
            "witness": list(self.witness),
        }


def _as_system(case_or_system: SystemCase | str | ConeSystem) -> ConeSystem:
    if isinstance(case_or_system, ConeSystem):
        return case_or_system
    return builtin_system(SystemCase(case_or_system))


def _square_matrix(system: ConeSystem, alpha, g) -> RationalMatrix:
    m = instantiate(system, alpha, g)
    if not m.is_square:
        raise NonSquare(f"{system.name} has {m.rows} rows over {m.cols} coordinates; simplicial checks need a square system")
    return m


def extreme_rays(system: SystemCase | str | ConeSystem, alpha, g) -> RaySet:
    system = _as_system(system)
    m = _square_matrix(system, alpha, g)
    inv = inverse(m)
    rays, active = [], []
    for i in range(inv.cols):
        ray = _primitive(inv.col(i))
        values = m.apply(ray)
        # column i of the inverse is positive on row i and vanishes on every other row
        if any(v < 0 for v in values) or sum(1 for v in values if v == 0) != m.rows - 1 or values[i] <= 0:
            raise Singular(f"ray {i} of {system.name} failed re-verification")
        rays.append(ray)
        active.append(m.rows - 1)
    return RaySet(rays, m, active)


def _decide(values: Sequence[Fraction]) -> FeasibilityCertificate:
    values = tuple(values)
    zeros = [i for i, v in enumerate(values) if v == 0]
    if zeros:
        return FeasibilityCertificate(True, "zero-ray", values, (zeros[0],))
    pos = [i for i, v in enumerate(values) if v > 0]
    neg = [i for i, v in enumerate(values) if v < 0]
    if pos and neg:
        return FeasibilityCertificate(True, "sign-change", values, (pos[0], neg[0]))
    return FeasibilityCertificate(False, "uniform-positive" if pos else "uniform-negative", values)


def _hyperplane_coordinates(system: ConeSystem, alpha: Fraction, g: Fraction) -> tuple[Fraction, ...]:
    sl = alpha_slice(system, alpha)
    m = sl.matrix(g)
    if not m.is_square:
        raise NonSquare(f"{system.name} is not square")
    return solve(m.transpose(), sl.hyperplane(g))


def cone_meets_hyperplane(system: SystemCase | str | ConeSystem, alpha, g) -> FeasibilityCertificate:
    """Does the hyperplane form vanish at a nonzero point of the cone? Certificate lists L on every ray."""
    system = _as_system(system)
    rays = extreme_rays(system, alpha, g)
    alpha, g = check_parameters(alpha, g)
    hyper = alpha_slice(system, alpha).hyperplane(g)
    values = [sum((h * x for h, x in zip(hyper, ray)), Fraction(0)) for ray in rays.rays]
    return _decide(values)


@dataclass
class VertexCertificate:
    """The all-tight configuration at one g.

    ``bordered`` is det [[M, anchor], [L, 0]], which equals det(M) * L(vertex)
    where the vertex solves M X = -anchor (the eliminated coordinate set to one).
    Its sign is defined even where M itself is singular.
    """

    g: Fraction
    bordered: Fraction
    vertex: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    feasible: bool = False

    @property
    def kind(self) -> str:
        if self.bordered == 0:
            return "on-hyperplane"
        return "positive" if self.bordered > 0 else "negative"

    def to_dict(self) -> dict:
        return {
            "g": str(self.g),
            "feasible": self.feasible,
            "kind": self.kind,
            "bordered_det": str(self.bordered),
            "hyperplane_value": None if self.value is None else str(self.value),
            "vertex": None if self.vertex is None else [str(x) for x in self.vertex],
        }


def extremal_vertex(system: SystemCase | str | ConeSystem, alpha, g) -> VertexCertificate:
    system = _as_system(system)
    alpha, g = check_parameters(alpha, g)
    if not system.has_anchor:
        raise DomainError(f"{system.name} has no anchor column; its all-tight configuration is only defined up to scale")
    sl = alpha_slice(system, alpha)
    m = sl.matrix(g)
    if not m.is_square:
        raise NonSquare(f"{system.name} has {m.rows} rows over {m.cols} coordinates")
    bordered = det(sl.bordered(g))
    try:
        vertex = solve(m, [-b for b in sl.anchor(g)])
    except Singular:
        return VertexCertificate(g, bordered)
    value = sum((h * x for h, x in zip(sl.hyperplane(g), vertex)), Fraction(0))
    return VertexCertificate(g, bordered, vertex, value)


@dataclass
class CriticalG:
    case: SystemCase
    alpha: Fraction
    lo: Fraction
    hi: Fraction
    certificate_lo: VertexCertificate
    certificate_hi: VertexCertificate
    singular_points: list[Fraction] = field(default_factory=list)
    system_name: str = ""
    feasible_sign: int = 1

    @property
    def bracket(self) -> RationalInterval:
        return RationalInterval(self.lo, self.hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def default_g_max(system: ConeSystem, alpha: Fraction) -> Fraction:
    poly = MATCHING_POLYNOMIAL.get(system.case)
    if poly is None:
        return CUSTOM_G_MAX
    return 2 * cauchy_bound(coefficients(poly, alpha))


def _check_case_alpha(system: ConeSystem, alpha: Fraction) -> None:
    poly = MATCHING_POLYNOMIAL.get(system.case)
    if poly is not None and not in_validity(poly, alpha):
        lo, hi, closed = VALIDITY[poly]
        right = "]" if closed else ")"
        raise DomainError(f"{system.case.value} is only considered for alpha in [{lo}, {hi}{right}, got {alpha}")


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _classify(cert: VertexCertificate, feasible_sign: int) -> VertexCertificate:
    cert.feasible = cert.bordered == 0 or _sign(cert.bordered) == feasible_sign
    return cert


def critical_g(
    case: SystemCase | str | ConeSystem,
    alpha,
    tol=DEFAULT_TOL,
    mesh: int = DEFAULT_MESH,
    g_max=None,
) -> CriticalG:
    """Smallest g at which the all-tight configuration reaches the hyperplane, as a bracket of width <= tol.

    The side of the hyperplane the configuration occupies at ``g_max`` is the
    feasible side. A mesh over (0, g_max] must show exactly one change from
    infeasible to feasible, which is then bisected.
    """
    system = _as_system(case)
    alpha, tol = as_rational(alpha), as_rational(tol)
    check_parameters(alpha, 1)
    _check_case_alpha(system, alpha)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    if mesh < 2:
        raise DomainError("mesh needs at least two points")
    top = as_rational(g_max) if g_max is not None else default_g_max(system, alpha)

    seen = [extremal_vertex(system, alpha, top * i / mesh) for i in range(1, mesh + 1)]
    signs = [_sign(c.bordered) for c in seen if c.bordered != 0]
    if not signs:
        raise NoCriticalValue(f"bordered determinant of {system.name} vanishes on the whole mesh at alpha={alpha}")
    feasible_sign = signs[-1]
    for cert in seen:
        _classify(cert, feasible_sign)
    singular = [c.g for c in seen if c.vertex is None]
    flips = [(a, b) for a, b in zip(seen, seen[1:]) if a.feasible != b.feasible]
    if not flips:
        raise NoCriticalValue(f"{system.name} at alpha={alpha} is feasible on the whole mesh up to g={top}")
    if len(flips) > 1:
        raise NonMonotone([(a.g, b.g) for a, b in flips])
    cert_lo, cert_hi = flips[0]

    while cert_hi.g - cert_lo.g > tol:
        cert = _classify(extremal_vertex(system, alpha, (cert_lo.g + cert_hi.g) / 2), feasible_sign)
        if cert.vertex is None:
            singular.append(cert.g)
        if cert.feasible:
            cert_hi = cert
        else:
            cert_lo = cert
    logger.debug("critical g for %s at alpha=%s in [%s, %s]", system.name, alpha, cert_lo.g, cert_hi.g)
    return CriticalG(system.case, alpha, cert_lo.g, cert_hi.g, cert_lo, cert_hi, singular, system.name, feasible_sign)


@dataclass
class LemmaPoint:
    """One grid point of verify_lemma.

    ``below_infeasible`` looks at g = critical lo - BELOW_OFFSET. It is True when
    the bordered determinant puts the all-tight configuration on the infeasible
    side there and, for the shipped systems, the matching polynomial still has
    the sign of its constant term, i.e. g sits below the polynomial root as well.
    For custom systems only the determinant side is checked.
    """

    alpha: Fraction
    simplicial: bool
    critical: CriticalG | None = None
    root: RootBracket | None = None
    overlap: bool = False
    below_infeasible: bool | None = None
    ray_test: str | None = None
    error: str | None = None


@dataclass
class LemmaReport:
    case: SystemCase
    system_name: str
    polynomial: PolynomialCase | None
    points: list[LemmaPoint] = field(default_factory=list)

    @property
    def all_overlap(self) -> bool:
        return bool(self.points) and all(p.overlap for p in self.points)


def _brackets_overlap(crit: CriticalG, root: RootBracket, tol: Fraction) -> bool:
    return crit.lo - tol <= root.hi and root.lo <= crit.hi + tol


def _lemma_point(args: tuple) -> LemmaPoint:
    system, alpha, tol, mesh = args
    poly = MATCHING_POLYNOMIAL.get(system.case)
    try:
        crit = critical_g(system, alpha, tol, mesh)
    except DiophantError as exc:
        logger.warning("no critical value for %s at alpha=%s: %s", system.name, alpha, exc)
        return LemmaPoint(alpha, not isinstance(exc, (Singular, NonSquare)), error=f"{type(exc).__name__}: {exc}")
    root = positive_root(poly, alpha, tol) if poly is not None else None
    below = None
    g_below = crit.lo - BELOW_OFFSET
    if g_below > 0:
        cert = _classify(extremal_vertex(system, alpha, g_below), crit.feasible_sign)
        below = not cert.feasible
        if poly is not None:
            coeffs = coefficients(poly, alpha)
            below = below and _sign(horner(coeffs, g_below)) == _sign(coeffs[-1])
    simplicial = crit.certificate_hi.vertex is not None
    ray_test = None
    if simplicial:
        try:
            ray_test = cone_meets_hyperplane(system, alpha, crit.hi).kind
        except Singular:
            ray_test = None
    overlap = root is not None and _brackets_overlap(crit, root, tol)
    return LemmaPoint(alpha, simplicial, crit, root, overlap, below, ray_test)


def verify_lemma(
    case: SystemCase | str | ConeSystem,
    alpha_grid: Sequence,
    tol=DEFAULT_TOL,
    workers: int = 1,
    mesh: int = DEFAULT_MESH,
) -> LemmaReport:
    """Critical g against the matching polynomial root at every grid point, in grid order."""
    system = _as_system(case)
    tol = as_rational(tol)
    grid = [as_rational(a) for a in alpha_grid]
    for a in grid:
        _check_case_alpha(system, a)
    jobs = [(system, a, tol, mesh) for a in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_lemma_point, jobs))
    else:
        points = [_lemma_point(job) for job in jobs]
    report = LemmaReport(system.case, system.name, MATCHING_POLYNOMIAL.get(system.case), points)
    logger.info("%s: %d/%d grid points overlap", system.name, sum(p.overlap for p in points), len(points))
    return report


# --- encoding checks ----------------------------------------------------------

@dataclass
class RowComparison:
    index: int
    label: str
    status: str  # identical | negated | differs


@dataclass
class EncodingCritical:
    alpha: Fraction
    inequalities: CriticalG | None = None
    matrix: CriticalG | None = None
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def identical(self) -> bool:
        if self.inequalities is None or self.matrix is None:
            return False
        return (self.inequalities.lo, self.inequalities.hi) == (self.matrix.lo, self.matrix.hi)


@dataclass
class EncodingReconciliation:
    g: Fraction
    rows: list[RowComparison]
    det_inequalities: Fraction
    det_matrix: Fraction
    critical: list[EncodingCritical] = field(default_factory=list)

    @property
    def differing(self) -> list[RowComparison]:
        return [r for r in self.rows if r.status != "identical"]


def _compare_rows(a: Sequence[Fraction], b: Sequence[Fraction]) -> str:
    if tuple(a) == tuple(b):
        return "identical"
    if tuple(a) == tuple(-x for x in b):
        return "negated"
    return "differs"


def reconcile_encodings(alpha_grid: Sequence, g=Fraction(2), tol=DEFAULT_TOL) -> EncodingReconciliation:
    """Row-by-row comparison of the ZIS inequality list with the literal coefficient matrix.

    Rows and determinants are compared at (first grid alpha, g); critical g is
    computed for both encodings at every grid alpha.
    """
    grid = [as_rational(a) for a in alpha_grid]
    if not grid:
        raise DomainError("reconcile_encodings needs a nonempty alpha grid")
    listed = builtin_system(SystemCase.ZIS)
    literal = builtin_system(SystemCase.ZIS, encoding="matrix")
    if listed.coord_labels != literal.coord_labels:
        raise DomainError("the two ZIS encodings use different coordinate orders")
    m_list, m_lit = instantiate(listed, grid[0], g), instantiate(literal, grid[0], g)
    b_list = alpha_slice(listed, grid[0]).anchor(as_rational(g))
    b_lit = alpha_slice(literal, grid[0]).anchor(as_rational(g))
    # the anchor entry is compared as one more column
    rows = [
        RowComparison(
            i + 1, listed.row_labels[i], _compare_rows(m_list.row(i) + (b_list[i],), m_lit.row(i) + (b_lit[i],))
        )
        for i in range(min(m_list.rows, m_lit.rows))
    ]
    out = EncodingReconciliation(as_rational(g), rows, det(m_list), det(m_lit))
    for r in out.differing:
        logger.warning("ZIS encodings disagree on row %d (%s): %s", r.index, r.label, r.status)
    for a in grid:
        entry = EncodingCritical(a)
        for key, system in (("inequalities", listed), ("matrix", literal)):
            try:
                setattr(entry, key, critical_g(system, a, tol))
            except DiophantError as exc:
                entry.errors[key] = f"{type(exc).__name__}: {exc}"
        out.critical.append(entry)
    return out


@dataclass
class AugmentationCandidate:
    label: str
    nonsingular: bool
    matches: list[bool] = field(default_factory=list)
    error: str | None = None

    @property
    def accepted(self) -> bool:
        return self.nonsingular and bool(self.matches) and all(self.matches)


@dataclass
class ZIS3Resolution:
    candidates: list[AugmentationCandidate]
    chosen: str | None

    @property
    def chosen_system(self) -> ConeSystem | None:
        if self.chosen is None:
            return None
        return complete_zis3([self.chosen])


def resolve_zis3(alpha_grid: Sequence, tol=Fraction(1, 10**6), sample_g=Fraction(2), mesh: int = 32) -> ZIS3Resolution:
    """Try each single augmentation row; keep the first that is nonsingular and reproduces the F3 roots."""
    base = builtin_system(SystemCase.ZIS3, encoding="printed")
    if base.is_square:
        raise DomainError("ZIS3 is already square; nothing to resolve")
    grid = [as_rational(a) for a in alpha_grid]
    if not grid:
        raise DomainError("resolve_zis3 needs a nonempty alpha grid")
    tol = as_rational(tol)
    candidates, chosen = [], None
    for label, _ in zis3_augmentation_pool():
        system = base.with_rows(augmentation_rows([label]), name=f"zis3+{label}")
        cand = AugmentationCandidate(label, det(instantiate(system, grid[0], sample_g)) != 0)
        if cand.nonsingular:
            for a in grid:
                try:
                    crit = critical_g(system, a, tol, mesh)
                except DiophantError as exc:
                    cand.error = f"{type(exc).__name__}: {exc}"
                    cand.matches.append(False)
                    break
                cand.matches.append(_brackets_overlap(crit, positive_root(PolynomialCase.F3, a, tol), tol))
        candidates.append(cand)
        if chosen is None and cand.accepted:
            chosen = label
    logger.info("ZIS3 augmentation: %d candidates, chosen %s", len(candidates), chosen)
    return ZIS3Resolution(candidates, chosen)
