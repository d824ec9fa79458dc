from fractions import Fraction

import pytest

from app.core.cones import (
    SystemCase,
    builtin_system,
    complete_zis3,
    cone_meets_hyperplane,
    critical_g,
    dump_system,
    extremal_vertex,
    extreme_rays,
    instantiate,
    parse_system,
    reconcile_encodings,
    resolve_zis3,
    solve_uv,
    verify_lemma,
)
from app.core.cones.builtin import augmentation_rows
from app.core.errors import DomainError, NoCriticalValue, NonMonotone, NonSquare, Singular, SystemFormatError
from app.core.matrix import det
from app.core.roots import positive_root

TOL = Fraction(1, 10**9)

QUADRANT = """
name quadrant
coord x
coord y
row 1 0   # x >= 0
row 0 1   # y >= 0
hyperplane {hyperplane}
"""

# one coordinate, x >= 0, vertex at x = -anchor
LINE = """
name line
coord x
row 1
hyperplane 1
anchor {anchor}
"""


def quadrant(hyperplane):
    return parse_system(QUADRANT.format(hyperplane=hyperplane))


def line(anchor):
    return parse_system(LINE.format(anchor=anchor))


def test_builtin_shapes():
    zis, zis2, zis3 = (builtin_system(c) for c in ("ZIS", "ZIS2", "ZIS3"))
    printed = builtin_system("ZIS3", encoding="printed")
    assert (zis.n_rows, zis.n_coords) == (15, 15)
    assert (zis2.n_rows, zis2.n_coords) == (15, 15)
    assert (printed.n_rows, printed.n_coords) == (18, 19)
    assert (zis3.n_rows, zis3.n_coords) == (19, 19)
    assert zis.has_anchor and zis3.is_square and not printed.is_square


def test_zis3_ships_with_the_ordering_row():
    zis3 = builtin_system("ZIS3")
    assert zis3.row_labels[-1] == "xi_r1-1 >= xi_r1"
    assert zis3 == complete_zis3(["xi_r1-1 >= xi_r1"])
    assert complete_zis3([]) == builtin_system("ZIS3", encoding="printed")
    with pytest.raises(ValueError):
        builtin_system("ZIS", encoding="printed")


def test_dump_then_parse_keeps_the_system():
    zis = builtin_system(SystemCase.ZIS)
    again = parse_system(dump_system(zis))
    assert again.coord_labels == zis.coord_labels
    assert again.rows == zis.rows
    assert again.anchor == zis.anchor
    assert again.row_labels == zis.row_labels
    assert instantiate(again, Fraction(1, 3), 2) == instantiate(zis, Fraction(1, 3), 2)


@pytest.mark.parametrize("text", [
    "coord x\nrow 1\n",                              # no hyperplane
    "row 1\nhyperplane 1\n",                         # no coordinates
    "coord x\nrow 1 2\nhyperplane 1\n",              # wrong width
    "coord x\nrow beta\nhyperplane 1\n",             # unknown symbol
    "coord x\nrow 1\nhyperplane 1\nanchor 1 2\n",    # anchor longer than the rows
    "coord x\nrow 1\nhyperplane 1\nfrobnicate\n",
    "coord x\ncoord x\nrow 1 1\nhyperplane 1 1\n",
])
def test_malformed_systems(text):
    with pytest.raises(SystemFormatError):
        parse_system(text)


def test_parameters_are_checked():
    with pytest.raises(DomainError):
        instantiate(builtin_system("ZIS"), 0, 2)
    with pytest.raises(DomainError):
        instantiate(builtin_system("ZIS"), Fraction(1, 3), 0)


def test_matrix_encoding_is_nonsingular():
    literal = builtin_system("ZIS", encoding="matrix")
    assert literal.n_rows == 15
    assert det(instantiate(literal, Fraction(1, 3), 2)) != 0
    with pytest.raises(ValueError):
        builtin_system("ZIS2", encoding="matrix")


def test_zis_extreme_rays():
    rays = extreme_rays("ZIS", Fraction(1, 3), 2)
    assert len(rays) == 15
    for i, ray in enumerate(rays.rays):
        values = rays.source.apply(ray)
        assert sum(1 for v in values if v == 0) == 14
        assert values[i] > 0
    assert cone_meets_hyperplane("ZIS", Fraction(1, 3), 2).feasible


def test_duplicated_row_is_singular():
    system = parse_system("coord x\ncoord y\nrow 1 0\nrow 1 0\nhyperplane 0 1\n")
    with pytest.raises(Singular):
        extreme_rays(system, Fraction(1, 2), 1)


@pytest.mark.parametrize("hyperplane, feasible, kind", [
    ("1 0", True, "zero-ray"),
    ("1 -1", True, "sign-change"),
    ("1 1", False, "uniform-positive"),
    ("-1 -2", False, "uniform-negative"),
])
def test_ray_certificates(hyperplane, feasible, kind):
    cert = cone_meets_hyperplane(quadrant(hyperplane), Fraction(1, 2), 1)
    assert (cert.feasible, cert.kind) == (feasible, kind)


def test_non_square_systems():
    printed = builtin_system("ZIS3", encoding="printed")
    with pytest.raises(NonSquare):
        cone_meets_hyperplane(printed, Fraction(1, 2), 2)
    with pytest.raises(NonSquare):
        critical_g(printed, Fraction(1, 2))
    report = verify_lemma(printed, [Fraction(1, 2)])
    assert report.points[0].error.startswith("NonSquare")
    assert not report.all_overlap


def test_extremal_vertex_of_a_line():
    cert = extremal_vertex(line("g-1"), Fraction(1, 2), 3)
    assert cert.vertex == (Fraction(-2),)
    assert cert.value == -2
    assert cert.bordered == -2
    assert cert.kind == "negative"
    with pytest.raises(DomainError):
        extremal_vertex(quadrant("1 0"), Fraction(1, 2), 1)


def test_critical_g_of_a_line():
    crit = critical_g(line("g-1"), Fraction(1, 2), TOL)
    assert crit.bracket.contains(1)
    assert crit.width <= TOL
    assert crit.certificate_hi.feasible and not crit.certificate_lo.feasible


def test_critical_g_failures():
    with pytest.raises(NoCriticalValue):
        critical_g(line("g"), Fraction(1, 2))
    with pytest.raises(NonMonotone):
        critical_g(line("(g-1)*(g-3)"), Fraction(1, 2))
    with pytest.raises(DomainError):
        critical_g(line("g-1"), Fraction(1, 2), mesh=1)
    with pytest.raises(DomainError):
        critical_g("ZIS", Fraction(3, 4))


def test_zis_critical_g_at_quarter():
    crit = critical_g("ZIS", Fraction(1, 4), TOL)
    assert crit.bracket.contains(1)


@pytest.mark.parametrize("case, poly, alpha", [
    ("ZIS", "F21", Fraction(1, 3)),
    ("ZIS", "F21", Fraction(1, 2)),
    ("ZIS2", "F22", Fraction(1, 2)),
    ("ZIS2", "F22", Fraction(3, 5)),
])
def test_critical_g_matches_polynomial_root(case, poly, alpha):
    crit = critical_g(case, alpha, TOL)
    root = positive_root(poly, alpha, TOL)
    assert crit.lo - TOL <= root.hi and root.lo <= crit.hi + TOL


def test_verify_lemma_report():
    report = verify_lemma("ZIS", [Fraction(1, 3), Fraction(2, 5)], TOL)
    assert report.all_overlap
    for point in report.points:
        assert point.simplicial
        assert point.below_infeasible is True
        assert point.ray_test in ("zero-ray", "sign-change")
        assert point.error is None


def test_below_bracket_check_on_a_custom_system():
    point = verify_lemma(line("g-1"), [Fraction(1, 2)], TOL).points[0]
    assert point.root is None and not point.overlap
    assert point.critical.bracket.contains(1)
    assert point.below_infeasible is True


def test_augmented_zis3_matches_f3():
    base = builtin_system("ZIS3", encoding="printed")
    system = base.with_rows(augmentation_rows(["xi_r1-1 >= xi_r1"]))
    assert system.is_square
    crit = critical_g(system, Fraction(1, 2), TOL)
    root = positive_root("F3", Fraction(1, 2), TOL)
    assert crit.lo - TOL <= root.hi and root.lo <= crit.hi + TOL
    with pytest.raises(ValueError):
        augmentation_rows(["no such row"])


def test_default_zis3_verifies_against_f3():
    report = verify_lemma("ZIS3", [Fraction(1, 2)], Fraction(1, 10**6), mesh=16)
    point = report.points[0]
    assert point.error is None
    assert point.overlap and point.below_infeasible is True


@pytest.mark.slow
def test_resolve_zis3_picks_the_ordering_row():
    res = resolve_zis3([Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)])
    assert res.chosen == "xi_r1-1 >= xi_r1"
    assert res.chosen_system.is_square
    first = res.candidates[0]
    assert first.label == "xi_nu-1 >= xi_nu" and not first.nonsingular


def test_reconcile_encodings():
    rec = reconcile_encodings([Fraction(1, 3)])
    status = {r.index: r.status for r in rec.rows}
    assert [i for i in status if status[i] == "negated"] == [9, 10, 11]
    assert [i for i in status if status[i] == "differs"] == [2, 3, 4, 5, 6]
    assert rec.det_inequalities != 0 and rec.det_matrix != 0
    assert rec.critical[0].inequalities is not None


def test_uv_at_quarter():
    sol = solve_uv(Fraction(1, 4))
    assert sol.u.is_point and sol.u.lo == Fraction(1, 3)
    assert sol.v.lo == Fraction(1, 3)
    assert sol.V.exact and sol.V.lo == 1
    assert sol.agree


def test_uv_agrees_inside():
    for alpha in (Fraction(1, 3), Fraction(1, 2), Fraction(4, 5)):
        assert solve_uv(alpha).agree
    with pytest.raises(DomainError):
        solve_uv(Fraction(1, 5))
