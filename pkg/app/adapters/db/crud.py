from typing import Optional

from sqlalchemy import select
from sqlalchemy.orm import Session

from . import models, schemas


def create_engine_run(db: Session, run: schemas.EngineRunCreate) -> models.EngineRun:
    """Reusable function to INSERT a finished engine run."""
    db_run = models.EngineRun(**run.model_dump())
    db.add(db_run)
    db.commit()
    db.refresh(db_run)
    return db_run


def get_engine_run(db: Session, key: str) -> Optional[models.EngineRun]:
    """Reusable function to SELECT a cached engine run by its content key."""
    stmt = select(models.EngineRun).where(models.EngineRun.key == key)
    return db.execute(stmt).scalars().first()
