"""Memoized engine runs in the SQLite cache under DIOPHANT_CACHE_DIR."""
from __future__ import annotations

import hashlib
import json
import logging
from fractions import Fraction

from ... import config
from ...core.approx_engine import ApproxResult, BestApproxRecord, TargetVector
from ...core.interval import RationalInterval
from ..db import crud, schemas
from ..db.database import get_session_factory
from .targets import canonical_target

logger = logging.getLogger(__name__)


def run_key(theta: TargetVector, Q: int) -> str:
    return hashlib.sha256(f"{canonical_target(theta)}|Q={Q}".encode()).hexdigest()


def encode_result(result: ApproxResult) -> str:
    lines = [json.dumps({"uncertain": result.uncertain, "Q": result.Q})]
    for r in result.records:
        lines.append(json.dumps([r.q, list(r.a), str(r.zeta.lo), str(r.zeta.hi), r.certified]))
    return "\n".join(lines)


def decode_result(payload: str) -> ApproxResult:
    head, *rows = payload.split("\n")
    meta = json.loads(head)
    records = []
    for line in rows:
        q, a, lo, hi, certified = json.loads(line)
        records.append(BestApproxRecord(q, tuple(a), RationalInterval(Fraction(lo), Fraction(hi)), certified))
    return ApproxResult(records, meta["uncertain"], meta["Q"])


class EngineCache:
    def __init__(self, cache_dir: str | None = None):
        self.cache_dir = cache_dir if cache_dir is not None else config.CACHE_DIR

    @property
    def enabled(self) -> bool:
        return bool(self.cache_dir)

    def get(self, theta: TargetVector, Q: int) -> ApproxResult | None:
        if not self.enabled:
            return None
        with get_session_factory(str(self.cache_dir))() as db:
            row = crud.get_engine_run(db, run_key(theta, Q))
            if row is None:
                return None
            logger.info("engine cache hit for %s at Q=%d", theta.label or "target", Q)
            return decode_result(row.payload)

    def put(self, theta: TargetVector, Q: int, result: ApproxResult) -> None:
        if not self.enabled:
            return
        key = run_key(theta, Q)
        with get_session_factory(str(self.cache_dir))() as db:
            if crud.get_engine_run(db, key) is None:
                crud.create_engine_run(
                    db, schemas.EngineRunCreate(key=key, label=theta.label, Q=Q, payload=encode_result(result))
                )
