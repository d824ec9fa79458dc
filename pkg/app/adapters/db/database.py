from functools import lru_cache
from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from ... import config

Base = declarative_base()


def database_url(cache_dir: str | Path) -> str:
    return f"sqlite:///{Path(cache_dir) / config.CACHE_DB_NAME}"


@lru_cache(maxsize=4)
def get_session_factory(cache_dir: str):
    """One engine per cache directory; tables are created on first use."""
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    engine = create_engine(database_url(cache_dir), future=True)
    Base.metadata.create_all(bind=engine)
    return sessionmaker(engine, expire_on_commit=False)
