"""The shipped inequality systems.

Coordinates are the logarithms xi_j = log zeta_j and X_j = log q_j at the
chain indices. X_nu is normalised away and kept as the anchor column. Every
row is oriented as ``form >= 0``; "<=" constraints are negated on
transcription. The alpha rows come from zeta_(j-1) <= q_j^(-alpha), that is
xi_(j-1) + alpha X_j <= 0.
"""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from app import config

from .system import ConeSystem, SystemCase, load_system, sparse_form

ZIS_COORDS = (
    "xi_nu-1", "xi_nu", "xi_r1-1", "xi_r1", "xi_r2-1", "xi_r2", "xi_k-1", "xi_k",
    "X_nu+1", "X_r1", "X_r1+1", "X_r2", "X_r2+1", "X_k", "X_k+1",
)

ZIS3_COORDS = (
    "xi_nu-1", "xi_nu", "xi_r1-1", "xi_r1", "xi_r2-1", "xi_r2", "xi_r3-1", "xi_r3", "xi_k-1", "xi_k",
    "X_nu+1", "X_r1", "X_r1+1", "X_r2", "X_r2+1", "X_r3", "X_r3+1", "X_k", "X_k+1",
)

# xi_nu + X_(nu+1) = xi_(r1-1) + X_r1
HYPERPLANE = {"xi_nu": 1, "X_nu+1": 1, "xi_r1-1": -1, "X_r1": -1}

MATRIX_ENCODING_FILE = "zis_matrix.sys"


def _alpha_row(j: str, xi_prev: str) -> tuple[str, dict]:
    # xi_(j-1) + alpha X_j <= 0
    return f"alpha j={j}", {xi_prev: -1, f"X_{j}": "-alpha"}


def _growth_row(j: str) -> tuple[str, dict]:
    # X_(j+1) <= g X_j
    nxt = "X_nu+1" if j == "nu" else f"X_{j}+1"
    return f"growth j={j}", {nxt: -1, f"X_{j}": "g"}


def _build(name: str, case: SystemCase, coords: tuple[str, ...], entries: list[tuple[str, dict]]) -> ConeSystem:
    forms = [sparse_form(coords, terms) for _, terms in entries]
    labels = tuple(label for label, _ in entries)
    hyperplane, _ = sparse_form(coords, HYPERPLANE)
    return ConeSystem(
        name, case, coords,
        tuple(row for row, _ in forms), hyperplane, labels,
        tuple(anchor for _, anchor in forms),
    )


def _zis_rows() -> list[tuple[str, dict]]:
    return [
        ("product bound", {"xi_nu-1": 1, "xi_r2-1": 1, "xi_k-1": 1, "xi_k": 1, "X_k+1": 1}),
        _alpha_row("nu", "xi_nu-1"),
        _alpha_row("nu+1", "xi_nu"),
        _alpha_row("r1+1", "xi_r1"),
        _alpha_row("r2+1", "xi_r2"),
        _alpha_row("k+1", "xi_k"),
        ("X_r1+1 <= X_r2", {"X_r2": 1, "X_r1+1": -1}),
        ("X_r2+1 <= X_k", {"X_k": 1, "X_r2+1": -1}),
        ("xi_r1-1 >= xi_r1", {"xi_r1-1": 1, "xi_r1": -1}),
        ("xi_r1 >= xi_r2-1", {"xi_r1": 1, "xi_r2-1": -1}),
        ("xi_r2 >= xi_k-1", {"xi_r2": 1, "xi_k-1": -1}),
        _growth_row("nu"),
        _growth_row("r1"),
        _growth_row("r2"),
        _growth_row("k"),
    ]


def _zis2_rows() -> list[tuple[str, dict]]:
    return [
        ("product bound", {"xi_nu-1": 1, "xi_r2-1": 1, "xi_k-1": 1, "xi_k": 1, "X_k+1": 1}),
        ("r1 product bound", {"xi_r1-1": 1, "xi_r1": 1, "X_r1+1": 1}),
        _alpha_row("nu", "xi_nu-1"),
        _alpha_row("nu+1", "xi_nu"),
        _alpha_row("r1+1", "xi_r1"),
        _alpha_row("r2+1", "xi_r2"),
        _alpha_row("k+1", "xi_k"),
        ("X_r1+1 <= X_r2", {"X_r2": 1, "X_r1+1": -1}),
        ("X_r2+1 <= X_k", {"X_k": 1, "X_r2+1": -1}),
        ("xi_r1 >= xi_r2-1", {"xi_r1": 1, "xi_r2-1": -1}),
        ("xi_r2 >= xi_k-1", {"xi_r2": 1, "xi_k-1": -1}),
        _growth_row("nu"),
        _growth_row("r1"),
        _growth_row("r2"),
        _growth_row("k"),
    ]


def _zis3_rows() -> list[tuple[str, dict]]:
    # the printed chain "xi_r1 >= xi_r2-1 >= xi_r2 xi_r3-1" is read as three links
    return [
        ("product bound", {"xi_nu-1": 1, "xi_r3-1": 1, "xi_k-1": 1, "xi_k": 1, "X_k+1": 1}),
        _alpha_row("nu", "xi_nu-1"),
        _alpha_row("nu+1", "xi_nu"),
        _alpha_row("r2+1", "xi_r2"),
        _alpha_row("r3+1", "xi_r3"),
        _alpha_row("k+1", "xi_k"),
        ("X_r1+1 <= X_r2", {"X_r2": 1, "X_r1+1": -1}),
        ("X_r2+1 <= X_r3", {"X_r3": 1, "X_r2+1": -1}),
        ("X_r3+1 <= X_k", {"X_k": 1, "X_r3+1": -1}),
        ("xi_r1 >= xi_r2-1", {"xi_r1": 1, "xi_r2-1": -1}),
        ("xi_r2-1 >= xi_r2", {"xi_r2-1": 1, "xi_r2": -1}),
        ("xi_r2 >= xi_r3-1", {"xi_r2": 1, "xi_r3-1": -1}),
        ("xi_r3 >= xi_k-1", {"xi_r3": 1, "xi_k-1": -1}),
        _growth_row("nu"),
        _growth_row("r1"),
        _growth_row("r2"),
        _growth_row("r3"),
        _growth_row("k"),
    ]


def _index_order(coords: tuple[str, ...], prefix: str) -> list[str]:
    return [c for c in coords if c.startswith(prefix)]


def zis3_augmentation_pool() -> list[tuple[str, dict]]:
    """Single rows that may complete the printed ZIS3 rows to a square system.

    Drawn from relations every best-approximation sequence satisfies:
    xi decreases and X increases along the index order, plus the alpha row at r1+1.
    """
    present = {label for label, _ in _zis3_rows()}
    pool = []
    xis = _index_order(ZIS3_COORDS, "xi_")
    for hi, lo in zip(xis, xis[1:]):
        label = f"{hi} >= {lo}"
        if label not in present:
            pool.append((label, {hi: 1, lo: -1}))
    xs = ["X_nu", *_index_order(ZIS3_COORDS, "X_")]
    for lo, hi in zip(xs, xs[1:]):
        label = f"{lo} <= {hi}"
        if label not in present:
            pool.append((label, {hi: 1, lo: -1}))
    pool.append(_alpha_row("r1+1", "xi_r1"))
    return pool


def augmentation_rows(labels: list[str]) -> list[tuple[str, tuple, object]]:
    by_label = dict(zis3_augmentation_pool())
    unknown = [label for label in labels if label not in by_label]
    if unknown:
        raise ValueError(f"unknown ZIS3 augmentation rows {unknown}")
    return [(label, *sparse_form(ZIS3_COORDS, by_label[label])) for label in labels]


@lru_cache(maxsize=None)
def builtin_system(case: SystemCase | str, encoding: str = "inequalities") -> ConeSystem:
    """The shipped systems.

    ``encoding="matrix"`` gives the literal ZIS coefficient matrix. ZIS3 comes
    completed with the rows of ``config.ZIS3_EXTRA_ROWS``; ``encoding="printed"``
    gives the printed ZIS3 rows alone, which are one short of square.
    """
    case = SystemCase(case)
    if encoding == "matrix":
        if case is not SystemCase.ZIS:
            raise ValueError("only ZIS ships a matrix encoding")
        return load_system(Path(config.SYSTEMS_DIR) / MATRIX_ENCODING_FILE)
    if encoding == "printed":
        if case is not SystemCase.ZIS3:
            raise ValueError("only ZIS3 has a separate printed encoding")
        return _build("zis3", case, ZIS3_COORDS, _zis3_rows())
    if encoding != "inequalities":
        raise ValueError(f"unknown encoding {encoding!r}")
    if case is SystemCase.ZIS:
        return _build("zis", case, ZIS_COORDS, _zis_rows())
    if case is SystemCase.ZIS2:
        return _build("zis2", case, ZIS_COORDS, _zis2_rows())
    if case is SystemCase.ZIS3:
        return complete_zis3(config.ZIS3_EXTRA_ROWS)
    raise ValueError("CUSTOM systems are loaded from files")


def complete_zis3(labels: list[str]) -> ConeSystem:
    """Printed ZIS3 plus the named augmentation rows."""
    printed = builtin_system(SystemCase.ZIS3, encoding="printed")
    if not labels:
        return printed
    return printed.with_rows(augmentation_rows(list(labels)), name="zis3-resolved")
