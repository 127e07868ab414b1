# tests/conftest.py

import json
import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

# Add the project root directory to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from models import Arrangement, BlowupState, Divisor, Nerve  # noqa: E402

settings.register_profile(
    "principalize",
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
settings.load_profile("principalize")


def make_state(rows, nerve=None, names=None):
    """BlowupState over Y0..Y{n-1} (or `names`) with the given coefficient rows."""
    n = len(rows[0])
    names = names or [f"Y{i}" for i in range(n)]
    return BlowupState(
        arrangement=Arrangement.original(names, nerve),
        divisors=tuple(Divisor(coeffs=tuple(row)) for row in rows),
    )


def instance_json(names, divisors, nerve="full", toric=True):
    return json.dumps({
        "format_version": 1,
        "divisor_names": list(names),
        "nerve": nerve,
        "divisors": list(divisors),
        "toric": toric,
    }, indent=2)


# Strategies

def coefficients(n, max_coeff=5):
    return st.lists(st.integers(0, max_coeff), min_size=n, max_size=n).map(tuple)


def divisors(n, max_coeff=5):
    return coefficients(n, max_coeff).map(lambda c: Divisor(coeffs=c))


@st.composite
def nerves(draw, n):
    """Downward-closed nerve on n vertices containing every singleton."""
    extra = draw(st.lists(
        st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True),
        max_size=2 * n,
    ))
    return Nerve.from_sets(n, [[i] for i in range(n)] + extra)


@st.composite
def states(draw, max_vertices=6, max_divisors=4, max_coeff=5, full_nerve=False, min_divisors=2):
    n = draw(st.integers(1, max_vertices))
    h = draw(st.integers(min_divisors, max_divisors))
    rows = draw(st.lists(coefficients(n, max_coeff), min_size=h, max_size=h))
    nerve = Nerve.full(n) if full_nerve else draw(nerves(n))
    return make_state(rows, nerve)


# Fixtures


@pytest.fixture
def xy_state():
    return make_state([(1, 0), (0, 1)], names=["x", "y"])


@pytest.fixture
def x2y_state():
    return make_state([(2, 0), (0, 1)], names=["x", "y"])


@pytest.fixture
def unit3_state():
    return make_state([(1, 0, 0), (0, 1, 0), (0, 0, 1)])


@pytest.fixture
def full3():
    return Nerve.full(3)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("PRINCIPALIZE_MAX_LEAVES", "PRINCIPALIZE_MAX_STEPS", "PRINCIPALIZE_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
