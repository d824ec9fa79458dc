import os
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from app.core.approx_engine import BestApproxRecord  # noqa: E402
from app.core.interval import RationalInterval  # noqa: E402

settings.register_profile("dev", max_examples=25, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile("ci" if "CI" in os.environ else "dev")

TARGETS_DIR = ROOT / "data" / "targets"
SYSTEMS_DIR = ROOT / "data" / "systems"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long sweeps, deselect with -m 'not slow'")


@pytest.fixture
def golden_path():
    return TARGETS_DIR / "golden.json"


@pytest.fixture
def power_basis_path():
    return TARGETS_DIR / "power_2_5.json"


def _plus(u, v):
    return tuple(x + y for x, y in zip(u, v))


@pytest.fixture
def chain_vectors():
    """Vectors in Z^5 with exactly one chain: nu = 1, r = (3,), k = 6.

    Triples at 1, 3 and 6 are independent, the ones at 2, 4 and 5 are not,
    T = span(e2, e3, e4) and both outer vectors leave T.
    """
    e1, e2, e3, e4, e5 = (tuple(int(i == j) for j in range(5)) for i in range(5))
    return [e1, e2, e3, _plus(e2, e3), e4, _plus(e4, e4), e5, _plus(e1, e2)]


@pytest.fixture
def chain_records(chain_vectors):
    return [
        BestApproxRecord(v[0], v[1:], RationalInterval.point(Fraction(1, 2 ** (i + 1))), True)
        for i, v in enumerate(chain_vectors)
    ]
