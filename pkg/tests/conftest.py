import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from odrlsem.bench import fixtures
from odrlsem.bench.generators import random_kb

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"

# acceptance results recorded by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture
def geo():
    return fixtures.kb("GEO000")


@pytest.fixture
def dpv():
    return fixtures.kb("DPV000")


@pytest.fixture
def lng():
    return fixtures.kb("LNG000")


@pytest.fixture
def bsb_kbs():
    return {"spatial": fixtures.kb("GEO000"), "purpose": fixtures.kb("DPV000"), "language": fixtures.kb("LNG000")}


def kb_from_seed(seed: int, max_concepts: int = 5, **kw):
    return random_kb(random.Random(seed), max_concepts, **kw)
