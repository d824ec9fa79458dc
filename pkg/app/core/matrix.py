"""Dense exact linear algebra over the rationals.

Determinants and ranks use fraction-free (Bareiss) elimination on an
integer-scaled copy of the matrix; solve/inverse use Gauss-Jordan over
Fractions and re-check the result by multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import EmptyInput, NonSquare, Singular, WrongDimension
from .interval import as_rational


@dataclass(frozen=True, slots=True)
class RationalMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_rational(x) for x in row) for row in self.entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise WrongDimension("matrix rows have different lengths")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> RationalMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise WrongDimension(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_cols = [other.col(j) for j in range(other.cols)]
        return RationalMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in other_cols) for r in self.entries)
        )

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise WrongDimension(f"vector of length {len(v)} for {self.cols} columns")
        v = [as_rational(x) for x in v]
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns the rows and the product of the scale factors."""
    out, scale = [], Fraction(1)
    for r in rows:
        m = lcm(*(as_rational(x).denominator for x in r)) if r else 1
        out.append([int(as_rational(x) * m) for x in r])
        scale *= m
    return out, scale


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """In-place Bareiss elimination. Returns (rank, sign * last pivot).

    For a square nonsingular input the second value is the determinant.
    """
    n_rows, n_cols = len(a), len(a[0]) if a else 0
    sign, prev, rank = 1, 1, 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((i for i in range(rank, n_rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[rank], a[pivot] = a[pivot], a[rank]
            sign = -sign
        p = a[rank][col]
        for i in range(rank + 1, n_rows):
            for j in range(col + 1, n_cols):
                a[i][j] = (a[i][j] * p - a[i][col] * a[rank][j]) // prev
            a[i][col] = 0
        prev = p
        rank += 1
    return rank, sign * prev


def det(m: RationalMatrix) -> Fraction:
    if not m.is_square:
        raise NonSquare(f"determinant of a {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return Fraction(1)
    a, scale = _integer_rows(m.entries)
    rank, d = _bareiss(a)
    if rank < m.rows:
        return Fraction(0)
    return Fraction(d) / scale


def rank(m: RationalMatrix) -> int:
    if m.rows == 0:
        return 0
    a, _ = _integer_rows(m.entries)
    return _bareiss(a)[0]


def int_rank(vs: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of integer vectors."""
    if not vs:
        raise EmptyInput("int_rank of an empty list")
    length = len(vs[0])
    if any(len(v) != length for v in vs):
        raise WrongDimension("vectors of different lengths")
    a = [[int(x) for x in v] for v in vs]
    return _bareiss(a)[0]


def _gauss_jordan(m: RationalMatrix, rhs_cols: list[list[Fraction]]) -> list[list[Fraction]]:
    n = m.rows
    k = len(rhs_cols)
    aug = [list(m.row(i)) + [rhs_cols[c][i] for c in range(k)] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise Singular("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [[aug[i][n + c] for i in range(n)] for c in range(k)]


def solve(m: RationalMatrix, rhs: Sequence) -> tuple[Fraction, ...]:
    if not m.is_square:
        raise NonSquare(f"solve with a {m.rows}x{m.cols} matrix")
    if len(rhs) != m.rows:
        raise WrongDimension("right-hand side length does not match the matrix")
    b = [as_rational(x) for x in rhs]
    x = tuple(_gauss_jordan(m, [b])[0])
    if list(m.apply(x)) != b:
        raise ArithmeticError("back-substitution check failed")
    return x


def inverse(m: RationalMatrix) -> RationalMatrix:
    if not m.is_square:
        raise NonSquare(f"inverse of a {m.rows}x{m.cols} matrix")
    n = m.rows
    unit = [[Fraction(int(i == c)) for i in range(n)] for c in range(n)]
    cols = _gauss_jordan(m, unit)
    inv = RationalMatrix(tuple(zip(*cols)))
    if m @ inv != RationalMatrix.identity(n):
        raise ArithmeticError("inverse check failed")
    return inv
