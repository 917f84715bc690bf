import random

import pytest
from hypothesis import given, settings, strategies as st

from molscope import exact_cover as ec
from molscope.latin import cyclic, elementary_abelian, random_latin_square
from molscope.mols import MolsList
from molscope.plex import build_profile, count_partitions, enumerate_plexes, transversals


def test_tiny_instances():
    inst = ec.ExactCoverInstance(3, ((0,), (1, 2), (0, 1), (2,)))
    assert sorted(ec.solve_enumerate(inst)) == [(0, 1), (2, 3)]
    assert ec.solve_count(inst) == 2
    assert ec.solve_count(ec.ExactCoverInstance(2, ((0,),))) == 0
    assert ec.solve_count(ec.ExactCoverInstance(0, ())) == 1


def test_knuth_example():
    subsets = ((2, 4, 5), (0, 3, 6), (1, 2, 5), (0, 3), (1, 6), (3, 4, 6))
    assert ec.solve_enumerate(ec.ExactCoverInstance(7, subsets)) == [(0, 3, 4)]


def test_limit():
    inst = ec.transversal_instance(cyclic(5))
    assert len(ec.solve_enumerate(inst, limit=4)) == 4


def test_rejects_out_of_range():
    with pytest.raises(ValueError):
        ec.ExactCoverInstance(2, ((0, 2),))


def test_known_counts():
    assert len(ec.transversals(cyclic(5))) == 15
    assert ec.count_mates(elementary_abelian(4)) == 2
    assert ec.count_mates(cyclic(4)) == 0


@settings(max_examples=150)
@given(st.integers(5, 8), st.integers(0, 2**32))
def test_oracle_agrees_with_plex_search(n, seed):
    L = random_latin_square(n, random.Random(seed))
    cat = transversals(L)
    ts = ec.transversals(L)
    assert {frozenset(p.cell_list()) for p in cat} == set(ts)
    mates = count_partitions(cat, 1) if len(cat) else 0
    assert mates == (ec.solve_count(ec.partition_instance(ts, n)) if ts else 0)


@settings(max_examples=30)
@given(st.integers(4, 6), st.integers(0, 2**32))
def test_two_plexes_via_oracle(n, seed):
    # a 2-plex is an exact double cover; check it splits the cells consistently with DLX on pairs
    L = random_latin_square(n, random.Random(seed))
    cat = enumerate_plexes(build_profile(L), 2)
    ts = ec.transversals(L)
    # every union of two disjoint transversals is a 2-plex
    cells = {frozenset(p.cell_list()) for p in cat}
    for i, a in enumerate(ts):
        for b in ts[i + 1:]:
            if not a & b:
                assert a | b in cells


def test_common_transversals_of_pair():
    from molscope.latin import linear

    M = MolsList((linear(5, 1), linear(5, 2)))
    assert len(ec.transversals(M)) == len(transversals(M))
