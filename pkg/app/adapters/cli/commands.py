"""``python main.py <command> ...``: flag parsing, run-config merging and exit codes.

Precedence, lowest first: environment defaults (app.config), the command's
section of config.yml, ``--config`` (flat JSON or YAML), then flags.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Sequence

import yaml
from pydantic import ValidationError

from ... import config
from ...core.errors import DiophantError, ExactHit
from ...services.lab_service import CommandResult, LabService, get_lab_service
from ..db.schemas import RunConfig
from ..files.writers import write_manifest

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_BAD_INPUT, EXIT_EXACT_HIT, EXIT_FAILURE = 0, 2, 3, 4

COMMANDS = {
    "best-approx": "certified best simultaneous approximations up to Q",
    "exponents": "finite-sample omega / omega_hat estimates",
    "detect-index": "degeneracy chains and the index proxy",
    "pipeline": "engine, exponents, chains and the lower bound in one row",
    "g-table": "G1, G2, G3 over an omega_hat grid",
    "verify-cones": "critical g of a cone system against its polynomial root",
    "reconcile-encodings": "compare the ZIS inequality list with the literal matrix",
    "resolve-zis3": "search single-row completions of the ZIS3 system",
    "remark2": "variant polynomial roots against G3",
    "uv-solve": "the (u, v) parameters over an alpha grid",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diophant-lab", description="Exact-arithmetic lab for uniform exponents.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat JSON or YAML parameter file")
        p.add_argument("--target", help="target JSON file")
        p.add_argument("--Q", type=int, help="largest denominator scanned")
        p.add_argument("--precision", type=int)
        p.add_argument("--alpha-grid", dest="alpha_grid", help="lo:hi:steps, endpoints included")
        p.add_argument("--tol")
        p.add_argument("--workers", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--case", help="zis, zis2, zis3, zis3-printed or zis-matrix")
        p.add_argument("--system", help="system file, overrides --case")
        p.add_argument("--tail-fraction", dest="tail_fraction")
        p.add_argument("--mesh", type=int)
        p.add_argument("--digits", type=int)
        p.add_argument("--max-n", dest="max_n", type=int)
        p.add_argument("--horizon", type=int)
    return parser


def _env_defaults() -> dict:
    return {
        "tol": config.DEFAULT_TOL,
        "workers": config.WORKERS,
        "seed": config.SEED,
        "mesh": config.MESH_POINTS,
        "digits": config.DECIMAL_DIGITS,
    }


def _read_mapping(path: Path) -> dict:
    # YAML is a superset of JSON, one loader covers both
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path} must hold a mapping of parameters")
    return data


def merge_run_config(command: str, flags: dict, defaults_file: Path | None = None) -> RunConfig:
    merged = _env_defaults()
    defaults_file = defaults_file or config.RUN_DEFAULTS_FILE
    if defaults_file and Path(defaults_file).exists():
        section = _read_mapping(Path(defaults_file)).get(command) or {}
        merged.update(section)
    if flags.get("config"):
        merged.update(_read_mapping(Path(flags["config"])))
    merged.update({k: v for k, v in flags.items() if v is not None and k != "config"})
    merged["command"] = command
    # numeric strings stay exact; YAML may hand us floats or ints for these
    for key in ("tol", "tail_fraction"):
        if key in merged and not isinstance(merged[key], str):
            merged[key] = str(merged[key])
    return RunConfig.model_validate(merged)


def _finish(cfg: RunConfig, result: CommandResult) -> int:
    if result.outputs:
        write_manifest(
            result.outputs[0], cfg.command, cfg.model_dump(), result.outputs,
            result.inputs, result.exit_code, result.notes,
        )
    for note in result.notes:
        logger.info(note)
    return result.exit_code


def run(argv: Sequence[str] | None = None, service: LabService | None = None) -> int:
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k != "command"}
    try:
        cfg = merge_run_config(args.command, flags)
    except (ValidationError, ValueError, OSError) as e:
        logger.error("invalid run configuration: %s", e)
        return EXIT_BAD_INPUT
    service = service or get_lab_service()
    try:
        return _finish(cfg, service.run(cfg))
    except ExactHit as e:
        logger.error("%s", e)
        return EXIT_EXACT_HIT
    except (ValueError, IndexError) as e:
        # expected input problems: malformed targets, bad grids, out-of-range parameters
        logger.error("bad input: %s", e)
        return EXIT_BAD_INPUT
    except (DiophantError, ArithmeticError, RuntimeError) as e:
        logger.error("computation failed: %s", e)
        return EXIT_FAILURE
    except Exception:
        logger.exception("unexpected error in %s", cfg.command)
        return EXIT_FAILURE
