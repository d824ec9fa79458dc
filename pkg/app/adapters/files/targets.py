"""Target files: JSON validated by ``TargetFile``.

    {"label": "golden", "precision": 40,
     "components": ["0.6180339887498948482045868343656381177203"]}

    {"label": "2^(i/5)", "precision": 40, "power_basis": {"r": "2", "k": 5, "n": 4}}

A component is "lo:hi", an exact "p/q", or a decimal read as the interval
[x, x + 10^-m] (towards zero for negatives) where m is its digit count.
"""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from ...core.approx_engine import TargetVector, generate_power_basis
from ...core.errors import DomainError
from ...core.interval import RationalInterval
from ...core.numeric import parse_decimal
from ..db.schemas import TargetFile

logger = logging.getLogger(__name__)


def parse_component(text: str, precision: int) -> RationalInterval:
    text = text.strip()
    if ":" in text:
        lo, _, hi = text.partition(":")
        return RationalInterval(parse_decimal(lo), parse_decimal(hi))
    x = parse_decimal(text)
    if "/" in text or "." not in text or "e" in text.lower():
        return RationalInterval.point(x)
    digits = len(text.split(".", 1)[1])
    if digits < precision:
        raise DomainError(f"component {text!r} has {digits} digits, the target declares {precision}")
    ulp = Fraction(1, 10**digits)
    return RationalInterval(x, x + ulp) if x >= 0 else RationalInterval(x - ulp, x)


def target_from_file_model(model: TargetFile) -> TargetVector:
    if model.power_basis is not None:
        pb = model.power_basis
        return generate_power_basis(parse_decimal(pb.r), pb.k, pb.n, model.precision, model.label or None)
    comps = tuple(parse_component(c, model.precision) for c in model.components)
    return TargetVector(comps, model.precision, model.label)


def load_target(path: str | Path, precision: int | None = None) -> TargetVector:
    """Read and validate a target file; ``precision`` overrides the declared digit count."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        model = TargetFile.model_validate(raw)
    except FileNotFoundError as exc:
        raise DomainError(f"target file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed target file {path}: {exc}") from exc
    except ValidationError as exc:
        raise DomainError(f"invalid target file {path}: {exc.errors()[0]['msg']}") from exc
    if precision is not None:
        model.precision = precision
    target = target_from_file_model(model)
    logger.info("loaded target %s (n=%d, precision=%d)", target.label or path.stem, target.n, target.precision)
    return target


def canonical_target(theta: TargetVector) -> str:
    """Stable text form of a target: the cache key and the manifest input."""
    return json.dumps(
        {
            "label": theta.label,
            "precision": theta.precision,
            "components": [f"{c.lo}:{c.hi}" for c in theta.components],
        },
        sort_keys=True,
    )
