"""Detection of the degeneracy pattern (nu, r_1, ..., r_n, k) in best-approximation vectors.

The independent-triple indices j (z_(j-1), z_j, z_(j+1) of rank 3) split the
sequence into runs of rank-2 triples. A chain is a window of consecutive
independent-triple indices nu = r_0 < r_1 < ... < r_n < r_(n+1) = k whose inner
triples r_1..r_n all span one 3-dimensional T, with z_(nu-1) and z_(k+1)
outside T and z_(nu-1), z_(r_n - 1), z_(k-1), z_k, z_(k+1) independent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .approx_engine import BestApproxRecord
from .errors import IndexOutOfRange, NotSameSubspace, WrongDimension
from .interval import RationalInterval
from .matrix import RationalMatrix, det, int_rank
from .numeric import certified_log

logger = logging.getLogger(__name__)

CHAIN_DIMENSION = 5
LOG_TOL = Fraction(1, 10**20)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Chain:
    nu: int
    r: tuple[int, ...]
    k: int
    T_basis: tuple[Vector, Vector, Vector]
    L_spans: tuple[tuple[Vector, Vector], ...]
    det_vi: int
    verified: bool = True

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.nu, *self.r, self.k)


@dataclass
class ChainReport:
    ok: bool
    conditions: dict[str, bool]
    det_vi: int | None = None

    @property
    def failed(self) -> list[str]:
        return [name for name, passed in self.conditions.items() if not passed]


@dataclass
class IndexEstimate:
    """Smallest chain length seen up to ``horizon``; a finite-horizon proxy, never the true index."""

    value: int | None
    witness_chains: list[Chain] = field(default_factory=list)
    horizon: int = 0

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @property
    def label(self) -> str:
        shown = "inf" if self.value is None else str(self.value)
        return f"index proxy {shown} (min chain length observed up to nu={self.horizon})"


def as_vectors(seq: Sequence) -> list[Vector]:
    return [s.vector if isinstance(s, BestApproxRecord) else tuple(int(x) for x in s) for s in seq]


def _triple(vs: Sequence[Vector], j: int) -> list[Vector]:
    return [vs[j - 1], vs[j], vs[j + 1]]


def triple_independent(seq: Sequence, j: int) -> bool:
    vs = as_vectors(seq)
    if not 1 <= j <= len(vs) - 2:
        raise IndexOutOfRange(f"triple at {j} needs 1 <= j <= {len(vs) - 2}")
    return int_rank(_triple(vs, j)) == 3


def _in_span(basis: Sequence[Vector], v: Vector) -> bool:
    return int_rank([*basis, v]) == int_rank(list(basis))


def _det_vi(vs: Sequence[Vector], nu: int, r_n: int, k: int) -> int:
    rows = [vs[nu - 1], vs[r_n - 1], vs[k - 1], vs[k], vs[k + 1]]
    return int(det(RationalMatrix.from_rows(rows)))


def _build_chain(vs: Sequence[Vector], idx: Sequence[int]) -> Chain | None:
    """Check (iii)-(vi) for a window of consecutive independent-triple indices."""
    nu, r, k = idx[0], tuple(idx[1:-1]), idx[-1]
    # gaps between independent triples have rank <= 2; proportional neighbours drop to rank 1
    if any(int_rank(_triple(vs, j)) != 2 for a, b in zip(idx, idx[1:]) for j in range(a + 1, b)):
        return None
    inner = [v for ri in r for v in _triple(vs, ri)]
    if int_rank(inner) != 3:
        return None
    T = tuple(_triple(vs, r[0]))
    if _in_span(T, vs[nu - 1]) or _in_span(T, vs[k + 1]):
        return None
    d = _det_vi(vs, nu, r[-1], k)
    if d == 0:
        return None
    spans = tuple((vs[a], vs[a + 1]) for a in idx[:-1])
    return Chain(nu, r, k, T, spans, d, True)


def independent_indices(seq: Sequence) -> list[int]:
    vs = as_vectors(seq)
    return [j for j in range(1, len(vs) - 1) if int_rank(_triple(vs, j)) == 3]


def detect_chains(seq: Sequence, max_n: int | None = None) -> list[Chain]:
    """Every chain in the sequence, ordered by (nu, k); each (nu, k) appears once."""
    vs = as_vectors(seq)
    if any(len(v) != CHAIN_DIMENSION for v in vs):
        raise WrongDimension(f"chain detection works on vectors in Z^{CHAIN_DIMENSION}")
    if len(vs) < CHAIN_DIMENSION:
        return []
    J = independent_indices(vs)
    chains = []
    for s in range(len(J)):
        if J[s] < 1:
            continue
        for n in range(1, len(J) - s - 1):
            if max_n is not None and n > max_n:
                break
            window = J[s : s + n + 2]
            # once the inner triples leave a common 3-space no longer window can recover
            inner = [v for ri in window[1:-1] for v in _triple(vs, ri)]
            if int_rank(inner) > 3:
                break
            chain = _build_chain(vs, window)
            if chain is not None:
                chains.append(chain)
    chains.sort(key=lambda c: (c.nu, c.k))
    logger.info("chain scan over %d vectors: %d independent triples, %d chains", len(vs), len(J), len(chains))
    return chains


def verify_chain(seq: Sequence, c: Chain) -> ChainReport:
    """Independent re-check of conditions (ii)-(vi) for one chain."""
    vs = as_vectors(seq)
    idx = c.indices
    if idx[0] < 1 or idx[-1] + 1 >= len(vs):
        raise IndexOutOfRange(f"chain {idx} does not fit a sequence of length {len(vs)}")
    conds: dict[str, bool] = {}
    conds["order"] = all(a < b for a, b in zip(idx, idx[1:]))
    conds["ii"] = all(int_rank(_triple(vs, ri)) == 3 for ri in idx)
    # every consecutive pair of a run shares one plane: all inner triples have rank 2
    conds["iii"] = all(
        int_rank(_triple(vs, j)) == 2 for a, b in zip(idx, idx[1:]) for j in range(a + 1, b)
    )
    T = _triple(vs, c.r[0])
    conds["iv"] = int_rank(T) == 3 and all(_in_span(T, v) for ri in c.r for v in _triple(vs, ri))
    conds["v"] = not _in_span(T, vs[c.nu - 1]) and not _in_span(T, vs[c.k + 1])
    d = _det_vi(vs, c.nu, c.r[-1], c.k)
    conds["vi"] = d != 0
    return ChainReport(all(conds.values()), conds, d)


def estimate_index(chains: Sequence[Chain], horizon: int) -> IndexEstimate:
    verified = [c for c in chains if c.verified]
    if not verified:
        return IndexEstimate(None, [], horizon)
    value = min(c.n for c in verified)
    return IndexEstimate(value, [c for c in verified if c.n == value], horizon)


def check_product_relation(seq: Sequence[BestApproxRecord], j1: int, j2: int) -> RationalInterval:
    """(zeta_j1 q_(j1+1)) / (zeta_(j2-1) q_j2) for indices whose planes coincide."""
    if not (1 <= j2 and j1 <= j2 and j1 + 1 < len(seq) and j2 < len(seq)):
        raise IndexOutOfRange(f"product relation needs valid indices, got ({j1}, {j2})")
    vs = as_vectors(seq)
    if (j1, j1 + 1) == (j2 - 1, j2):
        return RationalInterval.point(1)
    if int_rank([vs[j1], vs[j1 + 1], vs[j2 - 1], vs[j2]]) != 2:
        raise NotSameSubspace(f"span(z_{j1}, z_{j1 + 1}) differs from span(z_{j2 - 1}, z_{j2})")
    top = seq[j1].zeta * seq[j1 + 1].q
    bottom = seq[j2 - 1].zeta * seq[j2].q
    return top / bottom


def quintuples_independent(seq: Sequence) -> list[int]:
    """nu such that z_(nu-1), ..., z_(nu+3) are linearly independent (the index-1 sufficient condition)."""
    vs = as_vectors(seq)
    return [nu for nu in range(1, len(vs) - 3) if int_rank(vs[nu - 1 : nu + 4]) == 5]


def determinant_product(seq: Sequence[BestApproxRecord], c: Chain) -> RationalInterval:
    """zeta_(nu-1) zeta_(r_n - 1) zeta_(k-1) zeta_k q_(k+1), bounded below along chains."""
    z = [seq[c.nu - 1].zeta, seq[c.r[-1] - 1].zeta, seq[c.k - 1].zeta, seq[c.k].zeta]
    out = RationalInterval.point(seq[c.k + 1].q)
    for iv in z:
        out = out * iv
    return out


def growth_exponents(seq: Sequence[BestApproxRecord], c: Chain) -> dict[int, RationalInterval]:
    """log q_(j+1) / log q_j for j in (nu, r_1, ..., r_n, k)."""
    out = {}
    for j in c.indices:
        if seq[j].q > 1:
            out[j] = certified_log(seq[j + 1].q, LOG_TOL) / certified_log(seq[j].q, LOG_TOL)
    return out
