"""Run the acceptance computations end to end and print a pass/fail table.

    python scripts/run_acceptance.py [--quick]

--quick shrinks the grids and Q so the whole table finishes in seconds.
"""
import argparse
import logging
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pandas as pd
from dotenv import load_dotenv

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
load_dotenv()

from app import config  # noqa: E402
from app.adapters.files.targets import load_target  # noqa: E402
from app.core import chains, cones, exponents, roots  # noqa: E402
from app.core.approx_engine import best_approx_sequence, generate_power_basis, target_from_rationals  # noqa: E402
from app.core.cones.system import SystemCase  # noqa: E402
from app.core.interval import dist_to_int  # noqa: E402

BASE_PATH = Path(__file__).resolve().parent.parent / "data"
logger = logging.getLogger("acceptance")


# === Helpers ===
def naive_records(values, Q):
    """Plain scan on exact rational targets: (q, zeta) whenever the error drops."""
    out, best = [], None
    for q in range(1, Q + 1):
        err = max(dist_to_int(q * v) for v in values)
        if best is None or err < best:
            out.append((q, err))
            best = err
    return out


def fibonacci_upto(limit):
    fib, a, b = [], 1, 2
    while a <= limit:
        fib.append(a)
        a, b = b, a + b
    return fib


# === Criteria ===
def boundary_values(quick, seed):
    return all(roots.eval_poly(c, Fraction(1, 4), 1) == 0 for c in ("F1", "F21", "F3"))


def seam(quick, seed):
    tol = Fraction(1, 10**12)
    return roots.positive_root("F21", Fraction(1, 2), tol).overlaps(roots.positive_root("F22", Fraction(1, 2), tol))


def ordering(quick, seed):
    grid = roots.rational_grid(Fraction(1, 4), Fraction(1), 12 if quick else 50, include_ends=False)
    tol = Fraction(1, 10**12)
    prev = None
    for w in grid:
        g1, g2, g3 = (roots.G(k, w, tol) for k in (1, 2, 3))
        if not (g3.below(g2) and g2.below(g1)):
            return False
        if prev is not None and not all(p.below(c) for p, c in zip(prev, (g1, g2, g3))):
            return False
        prev = (g1, g2, g3)
    return True


def critical_vs_root(case, grid):
    def check(quick, seed):
        points = grid[::2] if quick else grid
        report = cones.verify_lemma(case, points, Fraction(1, 10**9))
        return report.all_overlap and all(p.below_infeasible is not False for p in report.points)
    return check


def zis3_resolved(quick, seed):
    res = cones.resolve_zis3([Fraction(3, 10), Fraction(1, 2), Fraction(7, 10)], Fraction(1, 10**9))
    logger.info("ZIS3 augmentation row: %s", res.chosen)
    return res.chosen is not None


def uv_system(quick, seed):
    sol = cones.solve_uv(Fraction(1, 4))
    if not (sol.u.is_point and sol.u.lo == Fraction(1, 3) and sol.v.lo == Fraction(1, 3) and sol.V.lo == 1):
        return False
    grid = roots.rational_grid(Fraction(1, 4), Fraction(99, 100), 20)
    return all(cones.solve_uv(a).agree for a in grid)


def oracle(quick, seed):
    rng = random.Random(seed)
    Q = 500 if quick else 10**4
    for _ in range(3 if quick else 20):
        values = [Fraction(rng.randrange(10**30), 10**30) for _ in range(4)]
        got = best_approx_sequence(target_from_rationals(values, precision=30), Q).records
        if [(r.q, r.zeta.lo) for r in got] != naive_records(values, Q):
            return False
    return True


def fibonacci(quick, seed):
    Q = 10**4 if quick else 10**6
    theta = load_target(BASE_PATH / "targets" / "golden.json")
    seq = best_approx_sequence(theta, Q).records
    if [r.q for r in seq] != fibonacci_upto(Q):
        return False
    est = exponents.estimate_exponents(seq, Fraction(1, 5))
    return all(Fraction(95, 100) <= x <= Fraction(110, 100) for x in (est.omega_est, est.omega_hat_est))


def synthetic_vectors(rng, length=12):
    """Random small vectors in Z^5 where every third one is the sum of the two before it."""
    vs = []
    for i in range(length):
        if i % 3 == 2:
            vs.append(tuple(x + y for x, y in zip(vs[-1], vs[-2])))
        else:
            vs.append(tuple(rng.randint(-3, 3) for _ in range(5)))
    return vs


def chain_round_trip(quick, seed):
    rng = random.Random(seed)
    for _ in range(10 if quick else 100):
        vs = synthetic_vectors(rng)
        if not all(chains.verify_chain(vs, c).ok and c.det_vi != 0 for c in chains.detect_chains(vs)):
            return False
    theta = generate_power_basis(2, 5, 4, 40)
    seq = best_approx_sequence(theta, 10**3 if quick else 10**4).records
    found = chains.detect_chains(seq)
    return all(chains.verify_chain(seq, c).ok and c.det_vi != 0 for c in found)


def bounds(quick, seed):
    grid = roots.rational_grid(Fraction(1, 2), Fraction(99, 100), 20)
    same = all(exponents.jarnik_bound(w) == exponents.schmidt_summerer_bound(w, 2) for w in grid)
    g = roots.rational_grid(Fraction(1, 4), Fraction(99, 100), 20)
    above = all(roots.theorem1_bound(1, w).lo >= w for w in g[1:])
    return same and above and roots.theorem1_bound(1, Fraction(1, 4)).contains(Fraction(1, 4))


def variant_crossing(quick, seed):
    grid = roots.rational_grid(Fraction(1, 4), Fraction(99, 100), 50)
    return bool(roots.crossover_points(grid))


CRITERIA = [
    ("exact boundary values", boundary_values),
    ("F21/F22 seam", seam),
    ("G3 < G2 < G1, increasing", ordering),
    ("ZIS critical g vs F21", critical_vs_root(SystemCase.ZIS, [Fraction(n, 20) for n in (5, 6, 7, 8, 9, 10)])),
    ("ZIS2 critical g vs F22", critical_vs_root(SystemCase.ZIS2, [Fraction(n, 10) for n in (5, 6, 7, 8, 9)])),
    ("ZIS3 resolved vs F3", zis3_resolved),
    ("u, v system", uv_system),
    ("engine vs naive oracle", oracle),
    ("Fibonacci denominators", fibonacci),
    ("chain round trip", chain_round_trip),
    ("bound consistency", bounds),
    ("variant root crossing", variant_crossing),
]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--only", help="substring of the criterion names to run")
    parser.add_argument("--seed", type=int, default=config.SEED)
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    rows = []
    for name, check in CRITERIA:
        if args.only and args.only not in name:
            continue
        start = time.perf_counter()
        try:
            status = "PASS" if check(args.quick, args.seed) else "FAIL"
        except Exception as e:
            logger.exception("criterion %s raised", name)
            status = f"ERROR: {type(e).__name__}"
        rows.append({"criterion": name, "status": status, "seconds": round(time.perf_counter() - start, 2)})
    table = pd.DataFrame(rows)
    print(table.to_string(index=False))
    return 0 if all(r["status"] == "PASS" for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
