import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

from ..adapters.db.schemas import (
    ChainRow,
    CriticalGRow,
    ExponentRow,
    LemmaPointRow,
    PipelineRow,
    RecordRow,
    RunConfig,
)
from ..adapters.files.cache import EngineCache
from ..adapters.files.targets import canonical_target, load_target
from ..adapters.files.writers import write_csv, write_json, write_jsonl
from ..core import chains, cones, exponents, roots
from ..core.approx_engine import ApproxResult, TargetVector, best_approx_sequence
from ..core.cones.system import ConeSystem, SystemCase
from ..core.errors import DiophantError, DomainError, ExactHit, TooShort, WrongDimension
from ..core.exponents import RatioRow
from ..core.interval import RationalInterval
from ..core.numeric import decimal_str, parse_decimal

logger = logging.getLogger(__name__)

EXIT_EXACT_HIT, EXIT_FAILURE = 3, 4

G_TABLE_COLUMNS = [
    "omega_hat", "omega_hat_decimal",
    "G1_lo", "G1_hi", "G1_decimal",
    "G2_branch", "G2_lo", "G2_hi", "G2_decimal",
    "G3_lo", "G3_hi", "G3_decimal",
    "bound1", "bound2", "bound3", "ss_bound_n4",
    "bound1_ge_ss", "bound2_ge_ss",
]
RATIO_COLUMNS = ["nu", "q", "zeta_mid", "ratio_omega", "ratio_omega_hat"]
REMARK2_COLUMNS = ["omega_hat", "omega_hat_decimal", "G3_decimal", "R2A_decimal", "R2B_decimal", "best", "improves_on_G3"]
UV_COLUMNS = [
    "alpha", "alpha_decimal", "V_lo", "V_hi", "V_decimal",
    "u_decimal", "v_decimal", "E1_decimal", "E2_decimal", "E3_decimal", "agree",
]
LEMMA_COLUMNS = list(LemmaPointRow.model_fields)


@dataclass
class CommandResult:
    outputs: list[Path] = field(default_factory=list)
    inputs: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    exit_code: int = 0


def parse_alpha_grid(text: Optional[str]) -> list[Fraction]:
    """"lo:hi:steps", endpoints included; steps = 0 gives an empty grid."""
    if not text:
        raise DomainError("this command needs --alpha-grid lo:hi:steps")
    lo, hi, steps = text.split(":")
    try:
        n = int(steps)
    except ValueError as exc:
        raise DomainError(f"grid steps must be an integer, got {steps!r}") from exc
    if n < 0:
        raise DomainError("grid steps must be non-negative")
    return roots.rational_grid(parse_decimal(lo), parse_decimal(hi), n)


def _bracket_strings(iv: RationalInterval | roots.RootBracket, digits: int) -> tuple[str, str, str]:
    return str(iv.lo), str(iv.hi), decimal_str((iv.lo + iv.hi) / 2, digits)


class LabService:
    """Runs one command end to end: compute through app.core, write through app.adapters."""

    def __init__(self, cache: EngineCache | None = None):
        self.cache = cache or EngineCache()
        logger.debug("lab service ready (cache %s)", "on" if self.cache.enabled else "off")

    # --- shared steps ---------------------------------------------------

    def _target(self, cfg: RunConfig) -> TargetVector:
        if not cfg.target:
            raise DomainError(f"{cfg.command} needs --target")
        return load_target(cfg.target, cfg.precision)

    def _engine(self, theta: TargetVector, cfg: RunConfig) -> ApproxResult:
        if cfg.Q is None:
            raise DomainError(f"{cfg.command} needs --Q")
        cached = self.cache.get(theta, cfg.Q)
        if cached is not None:
            return cached
        result = best_approx_sequence(theta, cfg.Q, cfg.workers)
        self.cache.put(theta, cfg.Q, result)
        return result

    @staticmethod
    def _out(cfg: RunConfig, default: str) -> Path:
        return Path(cfg.out or default)

    @staticmethod
    def _record_rows(records, digits: int) -> list[RecordRow]:
        return [
            RecordRow(
                nu=nu, q=r.q, a=list(r.a), zeta_lo=str(r.zeta.lo), zeta_hi=str(r.zeta.hi),
                zeta_decimal=decimal_str(r.zeta.mid, digits), certified=r.certified,
            )
            for nu, r in enumerate(records)
        ]

    @staticmethod
    def _chain_rows(seq, found: list[chains.Chain]) -> list[ChainRow]:
        rows = []
        for c in found:
            report = chains.verify_chain(seq, c)
            rows.append(
                ChainRow(
                    nu=c.nu, r=list(c.r), k=c.k, n=c.n, det_vi=c.det_vi, verified=report.ok,
                    T_basis=[list(v) for v in c.T_basis], conditions=report.conditions,
                )
            )
        return rows

    @staticmethod
    def _ratio_rows(rows: list[RatioRow], digits: int) -> list[dict]:
        def mid(iv):
            return None if iv is None else decimal_str(iv.mid, digits)

        return [
            {
                "nu": r.nu, "q": r.q, "zeta_mid": decimal_str(r.zeta_mid, digits),
                "ratio_omega": mid(r.ratio_omega), "ratio_omega_hat": mid(r.ratio_omega_hat),
            }
            for r in rows
        ]

    # --- commands ---------------------------------------------------------

    def best_approx(self, cfg: RunConfig) -> CommandResult:
        theta = self._target(cfg)
        out = self._out(cfg, "best_approx.jsonl")
        res = CommandResult(inputs={"target": canonical_target(theta)})
        try:
            result = self._engine(theta, cfg)
        except ExactHit as hit:
            res.outputs.append(write_jsonl(out, self._record_rows(hit.records, cfg.digits)))
            res.notes.append(f"exact hit at q={hit.q}; records truncated there")
            res.exit_code = EXIT_EXACT_HIT
            return res
        res.outputs.append(write_jsonl(out, self._record_rows(result.records, cfg.digits)))
        if result.uncertain:
            res.notes.append(f"{len(result.uncertain)} uncertain denominators: {result.uncertain[:20]}")
        return res

    def exponents(self, cfg: RunConfig) -> CommandResult:
        theta = self._target(cfg)
        result = self._engine(theta, cfg)
        est = exponents.estimate_exponents(result.records, parse_decimal(cfg.tail_fraction), theta.n)
        row = ExponentRow(
            omega_est=str(est.omega_est), omega_est_decimal=decimal_str(est.omega_est, cfg.digits),
            omega_hat_est=str(est.omega_hat_est), omega_hat_est_decimal=decimal_str(est.omega_hat_est, cfg.digits),
            tail_start=est.tail_window[0], tail_end=est.tail_window[1],
            enclosure_width=str(est.enclosure_width), outside_trivial_range=est.outside_trivial_range,
            omega_full=None if est.full_omega is None else str(est.full_omega),
            omega_hat_full=None if est.full_omega_hat is None else str(est.full_omega_hat),
        )
        out = self._out(cfg, "exponents.json")
        ratios = out.with_suffix(".ratios.csv")
        row.ratios_file = ratios.name
        outputs = [write_json(out, row), write_csv(ratios, self._ratio_rows(est.per_nu_ratios, cfg.digits), RATIO_COLUMNS)]
        notes = ["omega_hat estimate outside [1/n, 1]"] if est.outside_trivial_range else []
        return CommandResult(outputs, {"target": canonical_target(theta)}, notes)

    def detect_index(self, cfg: RunConfig) -> CommandResult:
        theta = self._target(cfg)
        seq = self._engine(theta, cfg).records
        found = chains.detect_chains(seq, cfg.max_n)
        proxy = chains.estimate_index(found, cfg.horizon if cfg.horizon is not None else len(seq) - 1)
        out = write_jsonl(self._out(cfg, "chains.jsonl"), self._chain_rows(seq, found))
        return CommandResult([out], {"target": canonical_target(theta)}, [proxy.label])

    def pipeline(self, cfg: RunConfig) -> CommandResult:
        theta = self._target(cfg)
        seq = self._engine(theta, cfg).records
        row = PipelineRow(label=theta.label, Q=cfg.Q, records=len(seq))
        est = None
        try:
            est = exponents.estimate_exponents(seq, parse_decimal(cfg.tail_fraction), theta.n)
            row.omega_est, row.omega_hat_est = str(est.omega_est), str(est.omega_hat_est)
        except TooShort as exc:
            row.notes.append(f"exponents: TooShort ({exc})")
        try:
            proxy = chains.estimate_index(chains.detect_chains(seq), len(seq) - 1)
            row.index_proxy = proxy.value
            row.notes.append(proxy.label)
        except WrongDimension as exc:
            proxy = None
            row.notes.append(f"chains: {exc}")
        if est is not None and proxy is not None and proxy.value in (1, 2, 3):
            try:
                bound = roots.theorem1_bound(proxy.value, est.omega_hat_est)
                row.bound_lo, row.bound_hi = str(bound.lo), str(bound.hi)
                slack = est.omega_est - bound.hi
                row.slack, row.slack_decimal = str(slack), decimal_str(slack, cfg.digits)
            except DiophantError as exc:
                row.notes.append(f"bound: {exc}")
        elif proxy is not None and proxy.is_infinite:
            row.notes.append("index proxy is infinite; no bound")
        out = write_json(self._out(cfg, "pipeline.json"), row)
        return CommandResult([out], {"target": canonical_target(theta)}, list(row.notes))

    def g_table(self, cfg: RunConfig) -> CommandResult:
        grid = parse_alpha_grid(cfg.alpha_grid)
        tol = parse_decimal(cfg.tol)
        rows, below_ss = [], []
        for w in grid:
            g1, g2, g3 = (roots.G(level, w, tol) for level in (1, 2, 3))
            l1, h1, d1 = _bracket_strings(g1, cfg.digits)
            l2, h2, d2 = _bracket_strings(g2, cfg.digits)
            l3, h3, d3 = _bracket_strings(g3, cfg.digits)
            bounds = [roots.theorem1_bound(level, w, tol) for level in (1, 2, 3)]
            ss = exponents.schmidt_summerer_bound(w, 4)
            # not certified below the n=4 bound; a failure is reported, never raised
            ge_ss = [b.hi >= ss for b in bounds[:2]]
            if not all(ge_ss):
                below_ss.append(str(w))
            rows.append({
                "omega_hat": str(w), "omega_hat_decimal": decimal_str(w, cfg.digits),
                "G1_lo": l1, "G1_hi": h1, "G1_decimal": d1,
                "G2_branch": g2.case.value, "G2_lo": l2, "G2_hi": h2, "G2_decimal": d2,
                "G3_lo": l3, "G3_hi": h3, "G3_decimal": d3,
                "bound1": decimal_str(bounds[0].mid, cfg.digits),
                "bound2": decimal_str(bounds[1].mid, cfg.digits),
                "bound3": decimal_str(bounds[2].mid, cfg.digits),
                "ss_bound_n4": decimal_str(ss, cfg.digits),
                "bound1_ge_ss": ge_ss[0], "bound2_ge_ss": ge_ss[1],
            })
        out = write_csv(self._out(cfg, "g_table.csv"), rows, G_TABLE_COLUMNS)
        notes = [f"bound1/bound2 below the n=4 bound at omega_hat in {below_ss}"] if below_ss else []
        return CommandResult([out], notes=notes)

    def _system(self, cfg: RunConfig) -> ConeSystem:
        if cfg.system:
            return cones.load_system(cfg.system)
        case = (cfg.case or "zis").lower()
        if case == "zis-matrix":
            return cones.builtin_system(SystemCase.ZIS, encoding="matrix")
        if case == "zis3-printed":
            return cones.builtin_system(SystemCase.ZIS3, encoding="printed")
        return cones.builtin_system(SystemCase(case.upper()))

    def verify_cones(self, cfg: RunConfig) -> CommandResult:
        system = self._system(cfg)
        grid = parse_alpha_grid(cfg.alpha_grid)
        report = cones.verify_lemma(system, grid, parse_decimal(cfg.tol), cfg.workers, cfg.mesh)
        rows = []
        for p in report.points:
            row = LemmaPointRow(
                case=report.case.value, system=report.system_name,
                alpha=str(p.alpha), alpha_decimal=decimal_str(p.alpha, cfg.digits),
                simplicial=p.simplicial, overlap=p.overlap, below_infeasible=p.below_infeasible,
                ray_test=p.ray_test, error=p.error,
            )
            if p.critical is not None:
                row.g_lo, row.g_hi, row.g_decimal = _bracket_strings(p.critical.bracket, cfg.digits)
            if p.root is not None:
                row.root_lo, row.root_hi, row.root_decimal = _bracket_strings(p.root, cfg.digits)
            rows.append(row)
        out = self._out(cfg, "verify_cones.json")
        outputs = [write_json(out, rows)]
        outputs.append(write_csv(out.with_suffix(".csv"), rows, LEMMA_COLUMNS))
        criticals = [
            CriticalGRow(
                case=report.case.value, system=report.system_name,
                alpha=str(p.alpha), alpha_decimal=decimal_str(p.alpha, cfg.digits),
                g_lo=str(p.critical.lo), g_hi=str(p.critical.hi),
                g_lo_decimal=decimal_str(p.critical.lo, cfg.digits), g_hi_decimal=decimal_str(p.critical.hi, cfg.digits),
                certificate_lo=p.critical.certificate_lo.to_dict(), certificate_hi=p.critical.certificate_hi.to_dict(),
            )
            for p in report.points if p.critical is not None
        ]
        outputs.append(write_jsonl(out.with_suffix(".certificates.jsonl"), criticals))
        overlapping = sum(p.overlap for p in report.points)
        res = CommandResult(outputs, {"system": system.name}, [f"{overlapping}/{len(report.points)} grid points overlap"])
        if report.points and all(p.error is not None for p in report.points):
            res.notes.append(f"every grid point failed, first: {report.points[0].error}")
            res.exit_code = EXIT_FAILURE
        return res

    def reconcile(self, cfg: RunConfig) -> CommandResult:
        grid = parse_alpha_grid(cfg.alpha_grid)
        rec = cones.reconcile_encodings(grid, tol=parse_decimal(cfg.tol))
        payload = {
            "g": str(rec.g),
            "det_inequalities": str(rec.det_inequalities),
            "det_matrix": str(rec.det_matrix),
            "rows": [vars(r) for r in rec.rows],
            "critical": [
                {
                    "alpha": str(c.alpha),
                    "inequalities": None if c.inequalities is None else [str(c.inequalities.lo), str(c.inequalities.hi)],
                    "matrix": None if c.matrix is None else [str(c.matrix.lo), str(c.matrix.hi)],
                    "identical": c.identical,
                    "errors": c.errors,
                }
                for c in rec.critical
            ],
        }
        out = write_json(self._out(cfg, "reconcile.json"), payload)
        notes = [f"row {r.index} ({r.label}): {r.status}" for r in rec.differing]
        return CommandResult([out], notes=notes)

    def resolve_zis3(self, cfg: RunConfig) -> CommandResult:
        grid = parse_alpha_grid(cfg.alpha_grid)
        res = cones.resolve_zis3(grid, parse_decimal(cfg.tol))
        payload = {"chosen": res.chosen, "candidates": [vars(c) for c in res.candidates]}
        out = write_json(self._out(cfg, "resolve_zis3.json"), payload)
        return CommandResult([out], notes=[f"chosen augmentation row: {res.chosen}"])

    def remark2(self, cfg: RunConfig) -> CommandResult:
        grid = parse_alpha_grid(cfg.alpha_grid)
        tol = parse_decimal(cfg.tol)
        rows, crossings = [], []
        for w in grid:
            cmp = roots.remark2_compare(w, tol)
            dec = {
                key: None if b is None else decimal_str(b.interval.mid, cfg.digits)
                for key, b in (("G3_decimal", cmp.g3), ("R2A_decimal", cmp.g_r2a), ("R2B_decimal", cmp.g_r2b))
            }
            rows.append({
                "omega_hat": str(w), "omega_hat_decimal": decimal_str(w, cfg.digits), **dec,
                "best": None if cmp.best is None else cmp.best.value, "improves_on_G3": cmp.improves_on_g3,
            })
            if cmp.improves_on_g3:
                crossings.append(str(w))
        out = write_csv(self._out(cfg, "remark2.csv"), rows, REMARK2_COLUMNS)
        return CommandResult([out], notes=[f"variant root above G3 at {len(crossings)} grid points"])

    def uv_solve(self, cfg: RunConfig) -> CommandResult:
        grid = parse_alpha_grid(cfg.alpha_grid)
        tol = parse_decimal(cfg.tol)
        rows = []
        for a in grid:
            sol = cones.solve_uv(a, tol)
            e1, e2, e3 = sol.expressions
            rows.append({
                "alpha": str(a), "alpha_decimal": decimal_str(a, cfg.digits),
                "V_lo": str(sol.V.lo), "V_hi": str(sol.V.hi), "V_decimal": decimal_str(sol.V.interval.mid, cfg.digits),
                "u_decimal": decimal_str(sol.u.mid, cfg.digits), "v_decimal": decimal_str(sol.v.mid, cfg.digits),
                "E1_decimal": decimal_str(e1.mid, cfg.digits), "E2_decimal": decimal_str(e2.mid, cfg.digits),
                "E3_decimal": decimal_str(e3.mid, cfg.digits), "agree": sol.agree,
            })
        out = write_csv(self._out(cfg, "uv.csv"), rows, UV_COLUMNS)
        return CommandResult([out])

    COMMANDS = {
        "best-approx": best_approx,
        "exponents": exponents,
        "detect-index": detect_index,
        "pipeline": pipeline,
        "g-table": g_table,
        "verify-cones": verify_cones,
        "reconcile-encodings": reconcile,
        "resolve-zis3": resolve_zis3,
        "remark2": remark2,
        "uv-solve": uv_solve,
    }

    def run(self, cfg: RunConfig) -> CommandResult:
        handler = self.COMMANDS.get(cfg.command)
        if handler is None:
            raise DomainError(f"unknown command {cfg.command!r}")
        logger.info("running %s", cfg.command)
        return handler(self, cfg)


@lru_cache(maxsize=1)
def get_lab_service() -> LabService:
    return LabService()
