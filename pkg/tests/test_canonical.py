import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from molscope.canonical import (
    CanonicalCertificate,
    EquivalenceMode,
    atp_order,
    canonical_certificate,
    classes_in_species,
    column_group,
    double_coset_count,
    encode_graph,
    key,
    label,
    notion_group,
    par_order,
    species_key,
)
from molscope.latin import cyclic, elementary_abelian, linear, random_latin_square, steiner_quasigroup_7
from molscope.mols import MolsList, OrthogonalArray, from_oa, to_oa

from conftest import load, random_isotope, random_paratopism


@pytest.mark.parametrize("L,par,atp", [
    (cyclic(3), 108, 18),
    (elementary_abelian(4), 576, 96),
    (cyclic(4), 192, 32),
    (cyclic(5), 600, 100),
    (cyclic(7), 1764, 294),
    (steiner_quasigroup_7(), 1008, 168),
])
def test_group_orders(L, par, atp):
    assert par_order(L) == par
    assert atp_order(L) == atp


def test_rigid_square():
    assert par_order(load("rigid_8226.txt")) == 1


def test_encoding_size():
    g = encode_graph(cyclic(3))
    g.check()
    # 3 column, 9 symbol and 9 row vertices; 9 column-symbol plus 27 row edges
    assert g.n_vertices == 21 and g.n_edges == 36


def test_certificate_hex_roundtrip():
    c = canonical_certificate(cyclic(5))
    assert CanonicalCertificate.fromhex(c.hex()) == c


@settings(max_examples=60)
@given(st.integers(2, 8), st.integers(0, 2**32))
def test_species_key_is_paratopism_invariant(n, seed):
    rng = random.Random(seed)
    L = random_latin_square(n, rng)
    M = random_paratopism(MolsList((L,)), rng)
    assert species_key(M) == species_key(L)
    assert par_order(M) == par_order(L)


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_mols_key_is_paratopism_invariant(seed):
    rng = random.Random(seed)
    M = MolsList(tuple(linear(7, x) for x in rng.sample(range(1, 7), 3)))
    N = random_paratopism(M, rng)
    assert species_key(N) == species_key(M)


@settings(max_examples=40)
@given(st.integers(3, 6), st.integers(0, 2**32))
def test_graph_relabelling(n, seed):
    rng = random.Random(seed)
    g = encode_graph(random_latin_square(n, rng))
    perm = list(range(g.n_vertices))
    rng.shuffle(perm)
    assert label(g.relabel(perm)).certificate == label(g).certificate


@settings(max_examples=40)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_atp_divides_par(n, seed):
    L = random_latin_square(n, random.Random(seed))
    assert par_order(L) % atp_order(L) == 0


@settings(max_examples=40)
@given(st.integers(3, 7), st.integers(0, 2**32))
def test_isotopism_keys(n, seed):
    rng = random.Random(seed)
    L = random_latin_square(n, rng)
    M = random_isotope(L, rng)
    assert key(M, EquivalenceMode.ISOTOPISM_LIST) == key(L, EquivalenceMode.ISOTOPISM_LIST)


def test_species_distinct_from_isotopy_for_asymmetric_square():
    # a rigid square and its transpose share a species but not an isotopy class
    L = load("rigid_8226.txt")
    assert species_key(L) == species_key(L.transpose())
    assert key(L, EquivalenceMode.ISOTOPISM_LIST) != key(L.transpose(), EquivalenceMode.ISOTOPISM_LIST)


def _brute_classes(M, notion_mode):
    """Distinct keys among every column reordering of the array."""
    O = to_oa(M)
    seen = set()
    for perm in permutations(range(O.width)):
        P = OrthogonalArray(O.order, tuple(tuple(row[j] for j in perm) for row in O.rows))
        seen.add(key(P, notion_mode))
    return len(seen)


BRUTE_CASES = [
    MolsList((linear(5, 1), linear(5, 2))),
    MolsList((linear(7, 1), linear(7, 3))),
    MolsList((cyclic(5),)),
    MolsList((load("rigid_8226.txt"),)),
    MolsList(tuple(linear(5, x) for x in (1, 2, 3))),
]


@pytest.mark.parametrize("M", BRUTE_CASES)
@pytest.mark.parametrize("mode,notion,kind", [
    (EquivalenceMode.ISOTOPISM_LIST, "isotopism", "list"),
    (EquivalenceMode.ISOTOPISM_SET, "isotopism", "set"),
    (EquivalenceMode.TRISOTOPISM_LIST, "trisotopism", "list"),
    (EquivalenceMode.TRISOTOPISM_SET, "trisotopism", "set"),
])
def test_double_cosets_match_brute_force(M, mode, notion, kind):
    cols, _ = column_group(M)
    assert classes_in_species(cols, notion, kind) == _brute_classes(M, mode)


def test_pair_of_order_five_classes():
    cols, par = column_group(MolsList((linear(5, 1), linear(5, 2))))
    assert par == 800
    assert classes_in_species(cols, "isotopism", "list") == 3
    assert classes_in_species(cols, "isotopism", "set") == 2


def test_double_cosets_trivial_groups():
    e = {(0, 1, 2)}
    full = set(permutations(range(3)))
    assert double_coset_count(e, e) == 6
    assert double_coset_count(full, e) == 1
    assert len(notion_group(4, "isotopism", "set")) == 2
    assert len(notion_group(4, "trisotopism", "set")) == 4
    with pytest.raises(ValueError):
        notion_group(4, "bogus", "set")


def test_mode_chain_refines():
    # finer notions never merge what coarser ones separate
    rng = random.Random(3)
    for _ in range(5):
        L = random_latin_square(6, rng)
        M = from_oa(to_oa(L).permute_columns((2, 0, 1)))
        same = [key(L, m) == key(M, m) for m in (
            EquivalenceMode.ISOTOPISM_LIST, EquivalenceMode.TRISOTOPISM_LIST, EquivalenceMode.SPECIES_LS)]
        assert same[2]
        assert not same[0] or same[1]
