import os
import random
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from molscope.cli import fixture_path
from molscope.latin import Isotopism, apply_isotopism, read_squares
from molscope.mols import MolsList, OrthogonalArray, from_oa, to_oa

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = []


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MOLSCOPE_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="set MOLSCOPE_EXTENDED=1 to run order-8 checks")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)


def load(name):
    squares = read_squares(fixture_path(name))
    return squares[0] if len(squares) == 1 else MolsList(tuple(squares))


def random_paratopism(M, rng):
    """Random column permutation, per-column symbol relabelling and row shuffle of the array."""
    O = to_oa(M)
    n, w = O.order, O.width
    cols = list(range(w))
    rng.shuffle(cols)
    syms = []
    for _ in range(w):
        p = list(range(n))
        rng.shuffle(p)
        syms.append(p)
    rows = [tuple(syms[j][row[cols[j]]] for j in range(w)) for row in O.rows]
    rng.shuffle(rows)
    return from_oa(OrthogonalArray(n, tuple(rows)), (0, 1))


def random_isotope(L, rng):
    return apply_isotopism(L, Isotopism.random(L.order, rng))


@lru_cache(maxsize=None)
def catalogue(n):
    from molscope.census import generate_species_reps

    return generate_species_reps(n)


@lru_cache(maxsize=None)
def census(n):
    from molscope.census import build_mols_census

    return build_mols_census(n, catalogue=catalogue(n))


@pytest.fixture(scope="session")
def census7():
    return census(7)


@pytest.fixture(scope="session")
def small_censuses():
    return {n: census(n) for n in range(2, 7)}


@pytest.fixture
def rng():
    return random.Random(20240)
