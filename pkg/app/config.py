import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

# LOGGING
LOG_LEVEL = os.getenv("DIOPHANT_LOG_LEVEL", "INFO").upper()

# CACHE (memoized engine runs); unset disables the cache
CACHE_DIR = os.getenv("DIOPHANT_CACHE_DIR") or None
CACHE_DB_NAME = os.getenv("DIOPHANT_CACHE_DB", "engine_runs.sqlite3")

# NUMERICS
DEFAULT_TOL = os.getenv("DIOPHANT_TOL", "1e-9")
DECIMAL_DIGITS = int(os.getenv("DIOPHANT_DECIMAL_DIGITS", 15))
WORKERS = int(os.getenv("DIOPHANT_WORKERS", 1))
SEED = int(os.getenv("DIOPHANT_SEED", 0))
MESH_POINTS = int(os.getenv("DIOPHANT_MESH_POINTS", 64))

# DATA FILES
DATA_DIR = Path(os.getenv("DIOPHANT_DATA_DIR", BASE_DIR / "data"))
SYSTEMS_DIR = Path(os.getenv("DIOPHANT_SYSTEMS_DIR", DATA_DIR / "systems"))
TARGETS_DIR = Path(os.getenv("DIOPHANT_TARGETS_DIR", DATA_DIR / "targets"))
RUN_DEFAULTS_FILE = Path(os.getenv("DIOPHANT_RUN_DEFAULTS", BASE_DIR / "config.yml"))

# ZIS3 completion rows appended to the printed system, ";"-separated labels; empty keeps it non-square
ZIS3_EXTRA_ROWS = [s.strip() for s in os.getenv("DIOPHANT_ZIS3_EXTRA_ROWS", "xi_r1-1 >= xi_r1").split(";") if s.strip()]
