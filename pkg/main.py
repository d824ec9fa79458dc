import logging
import sys

from dotenv import load_dotenv

load_dotenv()

# config reads the environment at import time, so it must come after load_dotenv
from app import config  # noqa: E402
from app.adapters.cli.commands import run  # noqa: E402

logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL, logging.INFO),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    stream=sys.stderr,
)

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
