from datetime import datetime
from typing import Optional

from sqlalchemy import TEXT, TIMESTAMP, Integer, String
from sqlalchemy.orm import Mapped, mapped_column

from .database import Base


class EngineRun(Base):
    __tablename__ = "engine_runs"
    run_id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    # sha256 of the canonical target text and Q
    key: Mapped[str] = mapped_column(String(64), unique=True, nullable=False, index=True)
    label: Mapped[str] = mapped_column(String(255), nullable=False, default="")
    Q: Mapped[int] = mapped_column(Integer, nullable=False)
    payload: Mapped[str] = mapped_column(TEXT, nullable=False)
    created_at: Mapped[Optional[datetime]] = mapped_column(TIMESTAMP, default=datetime.utcnow, nullable=True)
