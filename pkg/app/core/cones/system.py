"""Parametric homogeneous inequality systems and their plain-text format.

A system has named coordinates, rows read as ``form(X) >= 0`` and one target
hyperplane form. Entries are rational expressions in ``alpha``, ``g`` and
``a`` (= alpha / (1 - alpha)).

One coordinate may be eliminated from the matrix by normalising it to zero;
its coefficients are kept as the *anchor* column so the configuration with
that coordinate set to one can still be recovered.

File format, one directive per line, ``#`` starts a comment::

    name zis
    case ZIS
    coord xi_nu-1
    ...
    row 1 0 0 0 1 0 1 1 0 0 0 0 0 0 1   # product bound
    row 0 -1 0 0 0 0 0 0 alpha 0 0 0 0 0 0
    hyperplane 0 1 -1 0 0 0 0 0 1 -1 0 0 0 0 0
    anchor_name X_nu
    anchor 0 -alpha 0 0 0 0 0 0 0 0 0 g 0 0 0

A trailing comment on a ``row`` line becomes the row label. ``anchor`` lists
one entry per row, in row order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

import sympy
from sympy.parsing.sympy_parser import parse_expr

from ..errors import DomainError, SystemFormatError
from ..interval import as_rational
from ..matrix import RationalMatrix

logger = logging.getLogger(__name__)

ALPHA, G = sympy.symbols("alpha g", positive=True)
_LOCALS = {"alpha": ALPHA, "g": G, "a": ALPHA / (1 - ALPHA)}


class SystemCase(str, Enum):
    ZIS = "ZIS"
    ZIS2 = "ZIS2"
    ZIS3 = "ZIS3"
    CUSTOM = "CUSTOM"


def parse_entry(text: str, line_no: int | None = None) -> sympy.Expr:
    try:
        expr = parse_expr(text, local_dict=dict(_LOCALS), evaluate=True)
    except Exception as exc:  # sympy raises a zoo of parse errors
        raise SystemFormatError(f"cannot parse entry {text!r}: {exc}", line_no) from exc
    if not isinstance(expr, sympy.Expr) or not expr.free_symbols <= {ALPHA, G}:
        raise SystemFormatError(f"entry {text!r} may only use numbers, alpha, g and a", line_no)
    return sympy.nsimplify(expr, rational=True) if expr.has(sympy.Float) else expr


def _to_fraction(value: sympy.Expr) -> Fraction:
    value = sympy.nsimplify(value) if value.has(sympy.Float) else value
    if not value.is_Rational:
        raise DomainError(f"entry does not evaluate to a rational: {value}")
    return Fraction(int(value.p), int(value.q))


def _entry_text(expr: sympy.Expr) -> str:
    return str(expr).replace(" ", "")


@dataclass(frozen=True)
class ConeSystem:
    name: str
    case: SystemCase
    coord_labels: tuple[str, ...]
    rows: tuple[tuple[sympy.Expr, ...], ...]
    hyperplane: tuple[sympy.Expr, ...]
    row_labels: tuple[str, ...] = field(default=())
    anchor: tuple[sympy.Expr, ...] = field(default=())
    anchor_label: str = "X_nu"

    def __post_init__(self):
        width = len(self.coord_labels)
        if len(set(self.coord_labels)) != width:
            raise SystemFormatError(f"duplicate coordinate names in system {self.name}")
        if self.anchor_label in self.coord_labels:
            raise SystemFormatError(f"anchor {self.anchor_label} is also a coordinate of {self.name}")
        for i, r in enumerate(self.rows):
            if len(r) != width:
                raise SystemFormatError(f"row {i + 1} of {self.name} has {len(r)} entries, expected {width}")
        if len(self.hyperplane) != width:
            raise SystemFormatError(f"hyperplane of {self.name} has {len(self.hyperplane)} entries, expected {width}")
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"row {i + 1}" for i in range(len(self.rows))))
        if not self.anchor:
            object.__setattr__(self, "anchor", tuple(sympy.Integer(0) for _ in self.rows))
        if len(self.anchor) != len(self.rows):
            raise SystemFormatError(f"anchor of {self.name} has {len(self.anchor)} entries, expected {len(self.rows)}")

    @property
    def has_anchor(self) -> bool:
        return any(e != 0 for e in self.anchor)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_coords(self) -> int:
        return len(self.coord_labels)

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_coords

    def with_rows(
        self,
        extra: Sequence[tuple[str, Sequence[sympy.Expr], sympy.Expr]],
        name: str | None = None,
    ) -> ConeSystem:
        """Append (label, row, anchor entry) triples."""
        return ConeSystem(
            name or self.name,
            self.case,
            self.coord_labels,
            self.rows + tuple(tuple(r) for _, r, _ in extra),
            self.hyperplane,
            self.row_labels + tuple(label for label, _, _ in extra),
            self.anchor + tuple(sympy.sympify(e) for _, _, e in extra),
            self.anchor_label,
        )


def sparse_form(
    coords: Sequence[str], terms: Mapping[str, object], anchor_label: str = "X_nu"
) -> tuple[tuple[sympy.Expr, ...], sympy.Expr]:
    """Dense row and anchor entry from {coordinate name: coefficient}."""
    unknown = set(terms) - set(coords) - {anchor_label}
    if unknown:
        raise SystemFormatError(f"unknown coordinates {sorted(unknown)}")
    row = tuple(sympy.sympify(terms.get(c, 0), locals=_LOCALS) for c in coords)
    return row, sympy.sympify(terms.get(anchor_label, 0), locals=_LOCALS)


def check_parameters(alpha, g) -> tuple[Fraction, Fraction]:
    alpha, g = as_rational(alpha), as_rational(g)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if g <= 0:
        raise DomainError(f"g must be positive, got {g}")
    return alpha, g


class AlphaSlice:
    """A system with alpha fixed; entries become polynomials in g with rational coefficients."""

    def __init__(self, system: ConeSystem, alpha: Fraction):
        self.system = system
        self.alpha = alpha
        a = sympy.Rational(alpha.numerator, alpha.denominator)
        self._rows = [[self._compile(e.subs(ALPHA, a)) for e in row] for row in system.rows]
        self._hyper = [self._compile(e.subs(ALPHA, a)) for e in system.hyperplane]
        self._anchor = [self._compile(sympy.sympify(e).subs(ALPHA, a)) for e in system.anchor]

    @staticmethod
    def _compile(expr: sympy.Expr):
        expr = sympy.simplify(expr) if expr.free_symbols else expr
        if not expr.free_symbols:
            return (_to_fraction(expr),)
        poly = sympy.Poly(expr, G) if expr.is_polynomial(G) else None
        if poly is None:
            return expr  # rational in g: substituted per call
        return tuple(_to_fraction(c) for c in reversed(poly.all_coeffs()))

    @staticmethod
    def _value(entry, g: Fraction) -> Fraction:
        if isinstance(entry, tuple):
            acc = Fraction(0)
            for c in reversed(entry):
                acc = acc * g + c
            return acc
        return _to_fraction(entry.subs(G, sympy.Rational(g.numerator, g.denominator)))

    def matrix(self, g: Fraction) -> RationalMatrix:
        return RationalMatrix(tuple(tuple(self._value(e, g) for e in row) for row in self._rows))

    def hyperplane(self, g: Fraction) -> tuple[Fraction, ...]:
        return tuple(self._value(e, g) for e in self._hyper)

    def anchor(self, g: Fraction) -> tuple[Fraction, ...]:
        return tuple(self._value(e, g) for e in self._anchor)

    def bordered(self, g: Fraction) -> RationalMatrix:
        """[[M, anchor], [L, 0]]: singular exactly when the all-tight configuration lies on L = 0."""
        rows = [row + (b,) for row, b in zip(self.matrix(g).entries, self.anchor(g))]
        rows.append(self.hyperplane(g) + (Fraction(0),))
        return RationalMatrix(tuple(rows))


@lru_cache(maxsize=64)
def alpha_slice(system: ConeSystem, alpha: Fraction) -> AlphaSlice:
    return AlphaSlice(system, alpha)


def instantiate(system: ConeSystem, alpha, g) -> RationalMatrix:
    alpha, g = check_parameters(alpha, g)
    return alpha_slice(system, alpha).matrix(g)


# --- text format ------------------------------------------------------------

def parse_system(text: str, default_name: str = "custom") -> ConeSystem:
    name, case = default_name, SystemCase.CUSTOM
    coords: list[str] = []
    rows: list[tuple[int, list[str], str]] = []
    hyper: tuple[int, list[str]] | None = None
    anchor: tuple[int, list[str]] | None = None
    anchor_label = "X_nu"
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body, _, comment = raw.partition("#")
        parts = body.split()
        if not parts:
            continue
        keyword, args = parts[0].lower(), parts[1:]
        if keyword == "name":
            name = " ".join(args)
        elif keyword == "case":
            try:
                case = SystemCase(args[0].upper())
            except (IndexError, ValueError) as exc:
                raise SystemFormatError(f"unknown case {args}", line_no) from exc
        elif keyword == "coord":
            if len(args) != 1:
                raise SystemFormatError("coord takes exactly one name", line_no)
            coords.append(args[0])
        elif keyword == "row":
            rows.append((line_no, args, comment.strip()))
        elif keyword == "hyperplane":
            if hyper is not None:
                raise SystemFormatError("more than one hyperplane", line_no)
            hyper = (line_no, args)
        elif keyword == "anchor":
            if anchor is not None:
                raise SystemFormatError("more than one anchor", line_no)
            anchor = (line_no, args)
        elif keyword == "anchor_name":
            if len(args) != 1:
                raise SystemFormatError("anchor_name takes exactly one name", line_no)
            anchor_label = args[0]
        else:
            raise SystemFormatError(f"unknown directive {parts[0]!r}", line_no)
    if not coords:
        raise SystemFormatError("system declares no coordinates")
    if hyper is None:
        raise SystemFormatError("system has no hyperplane")
    width = len(coords)
    parsed_rows, labels = [], []
    for line_no, args, label in rows:
        if len(args) != width:
            raise SystemFormatError(f"row has {len(args)} entries, expected {width}", line_no)
        parsed_rows.append(tuple(parse_entry(t, line_no) for t in args))
        labels.append(label or f"row {len(labels) + 1}")
    line_no, args = hyper
    if len(args) != width:
        raise SystemFormatError(f"hyperplane has {len(args)} entries, expected {width}", line_no)
    hyperplane = tuple(parse_entry(t, line_no) for t in args)
    anchor_column: tuple[sympy.Expr, ...] = ()
    if anchor is not None:
        line_no, args = anchor
        if len(args) != len(parsed_rows):
            raise SystemFormatError(f"anchor has {len(args)} entries, expected {len(parsed_rows)}", line_no)
        anchor_column = tuple(parse_entry(t, line_no) for t in args)
    logger.debug("parsed system %s: %d rows over %d coordinates", name, len(parsed_rows), width)
    return ConeSystem(
        name, case, tuple(coords), tuple(parsed_rows), hyperplane, tuple(labels), anchor_column, anchor_label
    )


def load_system(path: str | Path) -> ConeSystem:
    path = Path(path)
    return parse_system(path.read_text(encoding="utf-8"), default_name=path.stem)


def dump_system(system: ConeSystem) -> str:
    lines = [f"name {system.name}", f"case {system.case.value}"]
    lines += [f"coord {c}" for c in system.coord_labels]
    for label, row in zip(system.row_labels, system.rows):
        lines.append("row " + " ".join(_entry_text(e) for e in row) + f"  # {label}")
    lines.append("hyperplane " + " ".join(_entry_text(e) for e in system.hyperplane))
    if system.has_anchor:
        lines.append(f"anchor_name {system.anchor_label}")
        lines.append("anchor " + " ".join(_entry_text(e) for e in system.anchor))
    return "\n".join(lines) + "\n"
