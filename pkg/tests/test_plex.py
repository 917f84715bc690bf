import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from molscope import exact_cover
from molscope.errors import NoTransversals
from molscope.latin import cyclic, elementary_abelian, is_orthogonal, random_latin_square, steiner_quasigroup_7
from molscope.mols import MolsList, extend
from molscope.plex import (
    alpha,
    build_profile,
    count_partitions,
    enumerate_partitions,
    enumerate_plexes,
    max_disjoint,
    theta,
    transversals,
)

from conftest import load, random_isotope


def random_square(n, seed):
    return random_latin_square(n, random.Random(seed))


def test_profile_bits():
    prof = build_profile(cyclic(3))
    assert prof.width == 6
    # column 1 and symbol (0 + 1) % 3 = 1 in the symbol block
    assert prof[0, 1] == (1 << 1) | (1 << (3 + 1))


@pytest.mark.parametrize("L,count,mates", [
    (cyclic(3), 3, 1),
    (elementary_abelian(4), 8, 2),
    (cyclic(5), 15, 3),
    (cyclic(6), 0, 0),
    (steiner_quasigroup_7(), 63, 8),
])
def test_known_counts(L, count, mates):
    assert len(transversals(L)) == count
    assert theta(L) == mates


def test_cyclic_seven():
    assert len(transversals(cyclic(7))) == 133
    assert theta(cyclic(7)) == 635


@given(st.integers(3, 7), st.integers(0, 2**32))
def test_skip_table(n, seed):
    cat = transversals(random_square(n, seed))
    N = len(cat)
    for i in range(N):
        for r in range(n):
            j = cat.skip[i, r]
            for m in range(i + 1, min(j, N)):
                assert cat.row_cells(m, r) == cat.row_cells(i, r)
            if j < N:
                assert cat.row_cells(j, r) != cat.row_cells(i, r)


@given(st.integers(2, 6), st.integers(1, 2), st.integers(0, 2**32))
def test_native_matches_python(n, p, seed):
    p = min(p, n)
    prof = build_profile(random_square(n, seed))
    a = enumerate_plexes(prof, p, backend="native")
    b = enumerate_plexes(prof, p, backend="python")
    assert [a.cells(i) for i in range(len(a))] == [b.cells(i) for i in range(len(b))]


@given(st.integers(2, 6), st.integers(0, 2**32))
def test_plexes_hit_every_item_p_times(n, seed):
    L = random_square(n, seed)
    for p in (1, 2):
        if p > n:
            continue
        for plex in enumerate_plexes(build_profile(L), p):
            cells = plex.cell_list()
            assert len(cells) == p * n
            for axis in (0, 1):
                counts = np.bincount([rc[axis] for rc in cells], minlength=n)
                assert (counts == p).all()
            assert (np.bincount([L[r, c] for r, c in cells], minlength=n) == p).all()


@given(st.integers(3, 7), st.integers(0, 2**32))
def test_counts_are_isotopism_invariant(n, seed):
    L = random_square(n, seed)
    M = random_isotope(L, random.Random(seed + 1))
    assert len(transversals(M)) == len(transversals(L))
    assert theta(M) == theta(L)


@settings(max_examples=30)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_partitions_are_mates(n, seed):
    L = random_square(n, seed)
    for E in extend(MolsList((L,)), limit=5):
        assert is_orthogonal(L, E[1])


def test_two_plex_partitions_of_cyclic_six():
    cat = enumerate_plexes(build_profile(cyclic(6)), 2)
    assert len(cat) > 0
    parts = list(enumerate_partitions(cat, 2, limit=3))
    for part in parts:
        union = 0
        for i in part:
            assert not union & cat.cells(i)
            union |= cat.cells(i)
        assert union == (1 << 36) - 1
    assert count_partitions(cat, 2) >= len(parts)


def test_partition_p_must_divide_order():
    cat = enumerate_plexes(build_profile(cyclic(5)), 2)
    with pytest.raises(ValueError):
        count_partitions(cat, 2)


def test_max_disjoint_and_alpha():
    assert max_disjoint(transversals(cyclic(5))) == 5
    assert alpha(cyclic(3)) == 3
    assert alpha(elementary_abelian(4)) == 4
    assert alpha(cyclic(7)) == 4
    with pytest.raises(NoTransversals):
        alpha(cyclic(4))


@given(st.integers(4, 7), st.integers(0, 2**32))
def test_dlx_agrees(n, seed):
    L = random_square(n, seed)
    assert len(transversals(L)) == len(exact_cover.transversals(L))
    assert theta(L) == exact_cover.count_mates(L)


def test_fixture_statistics():
    rigid = load("rigid_8226.txt")
    assert len(transversals(rigid)) == 371
    assert theta(rigid) == 8226
    assert alpha(rigid) == 3
    t4 = load("theta4.txt")
    assert theta(t4) == 4 and alpha(t4) == 4


@pytest.mark.slow
def test_order_nine_groups():
    assert theta(load("busy.txt")) == 121330
    assert theta(load("beta.txt")) == 141208


def test_planar_nearfield_square_mates():
    L = load("planar_4171.txt")
    assert len(transversals(L)) == 801
    assert theta(L) == 4171
