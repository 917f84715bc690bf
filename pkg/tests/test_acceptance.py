"""Acceptance criteria, one test per criterion.

Each test appends one ``criterion N: PASS/FAIL`` line that is printed in the
terminal summary.  Stated values that a faithful computation contradicts are
kept as strict xfail tests next to the criterion they belong to.
"""

import os
import random
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

from molscope import exact_cover, golden
from molscope.canonical import EquivalenceMode, key, par_order, species_key
from molscope.census import (
    census_rows,
    common_transversal_table,
    compare_with_golden,
    random_stats,
    run_census,
)
from molscope.cli import order10_checks
from molscope.counting import reduced_sets_from_reps, switch_counts
from molscope.latin import (
    count_intercalates,
    count_subsquares,
    cyclic,
    elementary_abelian,
    linear,
    random_latin_square,
    steiner_quasigroup_7,
)
from molscope.mols import MolsList, from_oa, max_disjoint_common_transversals, to_oa
from molscope.plex import alpha, count_partitions, theta, transversals

from conftest import ACCEPTANCE, catalogue, census, load, random_paratopism


class Checks:
    def __init__(self, number):
        self.number = number
        self.failed = []
        self.notes = []

    def __call__(self, desc, ok):
        if not ok:
            self.failed.append(desc)

    def note(self, text):
        self.notes.append(text)

    def finish(self):
        status = "PASS" if not self.failed else "FAIL"
        detail = "; ".join(self.notes + [f"failed: {d}" for d in self.failed])
        ACCEPTANCE.append(f"criterion {self.number}: {status}" + (f"  ({detail})" if detail else ""))
        assert not self.failed, self.failed


def square_counts(L):
    cat = transversals(L)
    return len(cat), count_partitions(cat, 1) if len(cat) else 0


# -- criterion 1 --------------------------------------------------------------

def test_criterion_1_mate_counts():
    check = Checks(1)
    check("theta(Z3) = 1", theta(cyclic(3)) == 1)
    check("theta(EA4) = 2", theta(elementary_abelian(4)) == 2)
    check("theta(Z5) = 3", theta(cyclic(5)) == 3)
    six = catalogue(6).reps()
    check("12 order-6 species", len(six) == 12)
    check("no order-6 species has a mate", all(theta(e.mols[0]) == 0 for e in six))
    check("Steiner quasigroup (63, 8)", square_counts(steiner_quasigroup_7()) == (63, 8))
    check("third order-7 square (25, 3)", square_counts(load("order7_25_transversals.txt")) == (25, 3))
    z7 = square_counts(cyclic(7))
    check("cyclic order 7 has 133 transversals", z7[0] == 133)
    oracle = exact_cover.count_mates(cyclic(7))
    check("cyclic order 7 mate count agrees with the exact cover oracle", z7[1] == oracle)
    # the stated 63 mates disagrees with both routes and with the log2 histogram bin 9 (512..1023)
    check("cyclic order 7 mate count sits in the log2 bin 9 of the order-7 histogram", 512 <= z7[1] < 1024)
    if z7[1] != 63:
        check.failed.append(f"cyclic order 7 mates: computed {z7[1]} by two routes, stated 63")
    try:
        check.finish()
    except AssertionError:
        if check.failed == [f"cyclic order 7 mates: computed {z7[1]} by two routes, stated 63"]:
            pytest.xfail("stated cyclic order-7 mate count 63 contradicts the computed 635")
        raise


@pytest.mark.xfail(strict=True, reason="two independent routes give 635 mates for the cyclic square of order 7")
def test_criterion_1_cyclic_order7_stated_mates():
    assert theta(cyclic(7)) == 63


# -- criterion 2 --------------------------------------------------------------

@pytest.mark.slow
def test_criterion_2_order_nine():
    check = Checks(2)
    check("EA9 theta = 12,445,836", theta(elementary_abelian(9)) == 12445836)
    check("Z9 theta = 2,049,219", theta(cyclic(9)) == 2049219)
    rigid = load("rigid_8226.txt")
    check("rigid square (371, 8226)", square_counts(rigid) == (371, 8226))
    check("rigid square 6 order-3 subsquares", count_subsquares(rigid, 3) == 6)
    check("rigid square par order 1", par_order(rigid) == 1)
    beta = load("beta.txt")
    check("beta square (819, 141208)", square_counts(beta) == (819, 141208))
    check("beta square alpha = 4", alpha(beta) == 4)
    check("beta square 18 order-3 subsquares", count_subsquares(beta, 3) == 18)
    check("beta square no intercalates", count_intercalates(beta) == 0)
    t4 = load("theta4.txt")
    check("theta=4 square (242, 4)", square_counts(t4) == (242, 4))
    check("theta=4 square 3 order-3 subsquares", count_subsquares(t4, 3) == 3)
    check("theta=4 square par order 4", par_order(t4) == 4)
    busy = load("busy.txt")
    check("busy square (755, 121330)", square_counts(busy) == (755, 121330))
    check("busy square par order 2", par_order(busy) == 2)
    check.finish()


# -- criterion 3 --------------------------------------------------------------

def test_criterion_3_census_up_to_seven():
    check = Checks(3)
    mismatches = []
    for n in range(2, 8):
        mismatches += compare_with_golden(census_rows(census(n)))
    check("every row of the four census tables for n <= 7", not mismatches)
    c7 = census(7)
    reps = c7.levels[1]
    check("147 species of order 7", len(reps) == 147)
    check("141 bachelor species of order 7", sum(1 for e in reps if e.theta == 0) == 141)
    check("MOLS(2,7) species = 7", len(c7.species(2)) == 7)
    check("maxMOLS(2,7) species = 5", len(c7.species(2, True)) == 5)
    check("MOLS(6,7) species = 1", len(c7.species(6)) == 1)
    rows = census_rows(c7)
    check("list row (7,3) = 2400/20/10/1", rows["mols_lists"][(7, 3)].values() == (2400, 20, 10, 1))
    check.note(f"{sum(len(census(n).levels) for n in range(2, 8))} (n, k) levels compared")
    check.finish()


# -- criterion 4 --------------------------------------------------------------

def test_criterion_4_counting_identities():
    check = Checks(4)
    quad = switch_counts(7, 2, "RL", 342480)
    check("AL(2,7) from RL(2,7)", quad.AL == 6263668776960000)
    check("count quadruple consistent", quad.check())
    c7 = census(7)
    for k in sorted(c7.levels):
        if k == 1:
            continue
        rs = reduced_sets_from_reps(7, k, [e.par for e in c7.species(k)])
        check(f"reduced sets (7,{k}) match the Equality column", rs == golden.MOLS_SETS[(7, k)][0])
    for n in range(3, 8):
        check(f"random square statistics n={n}", random_stats(catalogue(n).reps()) == golden.RANDOM_LS[n])
    _, p7, e7 = random_stats(catalogue(7).reps())
    check("n=7 rationals 5891/564736 and 1427/70592",
          (p7, e7) == (Fraction(5891, 564736), Fraction(1427, 70592)))
    check.finish()


# -- criterion 5 --------------------------------------------------------------

STATED_COMMON = "A,B have 7 common transversals"


def test_criterion_5_order_ten():
    check = Checks(5)
    results = order10_checks()
    for desc, ok, detail in results:
        if desc != STATED_COMMON:
            check(desc, ok)
    A, B = load("order10_A.txt"), load("order10_B.txt")
    M = MolsList((A, B))
    ours = {frozenset(p.cell_list()) for p in transversals(M)}
    oracle = set(exact_cover.transversals(M))
    check("plex search and exact cover agree on the common transversals", ours == oracle)
    check("7 disjoint common transversals", max_disjoint_common_transversals(M) == 7)
    if len(ours) != 7:
        check.failed.append(f"|common_transversals(A,B)|: computed {len(ours)} by two routes, stated 7")
    try:
        check.finish()
    except AssertionError:
        if len(check.failed) == 1 and check.failed[0].startswith("|common_transversals"):
            pytest.xfail("A,B have 14 common transversals; 7 is the largest disjoint family")
        raise


@pytest.mark.xfail(strict=True, reason="both search routes find 14 common transversals of A and B")
def test_criterion_5_stated_common_transversal_count():
    A, B = load("order10_A.txt"), load("order10_B.txt")
    assert len(transversals(MolsList((A, B)))) == 7


# -- criterion 6 --------------------------------------------------------------

def test_criterion_6_common_transversal_table():
    check = Checks(6)
    got = common_transversal_table(census(7).species(2, True))
    expected = Counter({(0, 0): 1, (1, 1): 1, (2, 1): 1, (4, 1): 2})
    check("maxMOLS(2,7) by (common, max disjoint)", got == expected)
    # second route: enumerate with the oracle and find the largest disjoint family by brute force
    oracle = Counter()
    for e in census(7).species(2, True):
        ts = exact_cover.transversals(e.mols)
        best = 0
        for mask in range(1 << len(ts)):
            chosen = [t for i, t in enumerate(ts) if mask >> i & 1]
            cells = [c for t in chosen for c in t]
            if len(cells) == len(set(cells)):
                best = max(best, len(chosen))
        oracle[len(ts), best] += 1
    check("exact cover route gives the same table", oracle == expected)
    check.note(f"rows {dict(sorted(got.items()))}")
    check.finish()


# -- criterion 7 --------------------------------------------------------------

PARATOPISM_FIXTURES = [
    "rigid_8226.txt", "beta.txt", "busy.txt", "theta4.txt", "order7_25_transversals.txt",
    "order10_A.txt", "order10_B.txt", "order10_C.txt",
]


def test_criterion_7_property_suites():
    check = Checks(7)
    rng = random.Random(7_000)
    bad = 0
    for _ in range(10_000):
        n = rng.randint(5, 8)
        L = random_latin_square(n, rng)
        cat = transversals(L)
        ts = exact_cover.transversals(L)
        same_sets = {frozenset(p.cell_list()) for p in cat} == set(ts)
        a = count_partitions(cat, 1) if len(cat) else 0
        b = exact_cover.solve_count(exact_cover.partition_instance(ts, n)) if ts else 0
        bad += not (same_sets and a == b)
    check("plex search equals exact cover on 10,000 random squares of orders 5-8", bad == 0)

    fixtures = [MolsList((load(f),)) for f in PARATOPISM_FIXTURES]
    fixtures.append(MolsList((load("order10_A.txt"), load("order10_B.txt"))))
    fixtures.append(MolsList(tuple(linear(7, x) for x in (1, 2, 3))))
    for M in fixtures:
        k0 = species_key(M)
        ok = all(species_key(random_paratopism(M, rng)) == k0 for _ in range(1000))
        check(f"certificate invariant under 1,000 paratopisms (order {M.order}, k={M.k})", ok)

    chain_ok = True
    for _ in range(200):
        n = rng.randint(4, 7)
        L = random_latin_square(n, rng)
        O = to_oa(L)
        cols = list(range(3))
        rng.shuffle(cols)
        N = from_oa(O.permute_columns(cols))[0]
        iso = key(L, EquivalenceMode.ISOTOPISM_LIST) == key(N, EquivalenceMode.ISOTOPISM_LIST)
        tri = key(L, EquivalenceMode.TRISOTOPISM_LIST) == key(N, EquivalenceMode.TRISOTOPISM_LIST)
        spe = species_key(L) == species_key(N)
        chain_ok &= (not iso or tri) and (not tri or spe) and spe
    check("isotopism => trisotopism => species", chain_ok)

    L1, L2, L4 = linear(5, 1), linear(5, 2), linear(5, 4)
    lst = EquivalenceMode.ISOTOPISM_LIST
    check("(L1,L4) isotopic to (L4,L1) as lists", key(MolsList((L1, L4)), lst) == key(MolsList((L4, L1)), lst))
    check("(L1,L2) not isotopic to (L2,L1) as lists", key(MolsList((L1, L2)), lst) != key(MolsList((L2, L1)), lst))

    skip_ok = True
    for _ in range(200):
        n = rng.randint(3, 7)
        cat = transversals(random_latin_square(n, rng))
        N = len(cat)
        for i in range(N):
            for r in range(n):
                j = int(cat.skip[i, r])
                inside = all(cat.row_cells(m, r) == cat.row_cells(i, r) for m in range(i + 1, min(j, N)))
                edge = j >= N or cat.row_cells(j, r) != cat.row_cells(i, r)
                skip_ok &= inside and edge
    check("skip table on 200 random catalogues", skip_ok)

    quad_ok = True
    for n in range(2, 8):
        for table in census_rows(census(n)).values():
            for (tn, k), row in table.items():
                if row.equality and k < tn:
                    which = "RL" if row.kind == "list" else "RS"
                    quad_ok &= switch_counts(tn, k, which, row.equality).check()
    check("count quadruples integral on every census row", quad_ok)
    check.finish()


# -- criterion 8 --------------------------------------------------------------

def test_criterion_8_order_eight(tmp_path):
    reps = os.environ.get("MOLSCOPE_REPS8")
    if os.environ.get("MOLSCOPE_EXTENDED") != "1" or not reps or not Path(reps).exists():
        ACCEPTANCE.append("criterion 8: SKIPPED  (set MOLSCOPE_EXTENDED=1 and MOLSCOPE_REPS8=<species file>)")
        pytest.skip("order-8 census runs only in extended mode with a representatives file")
    check = Checks(8)
    c8, rows, bad = run_census(8, tmp_path, threads=int(os.environ.get("MOLSCOPE_THREADS", "1")),
                               reps_file=reps, extended=True)
    check("283,657 species of order 8", len(c8.levels[1]) == 283657)
    check("census rows for n = 8", not bad)
    check("maxMOLS species counts 2127/38/1",
          [len(c8.species(k, True)) for k in (2, 3, 7)] == [2127, 38, 1])
    table = common_transversal_table(c8.species(2, True))
    totals = Counter()
    for (_, d), m in table.items():
        totals[d] += m
    check("common transversal totals 1980/34/79/34", [totals[d] for d in (0, 1, 2, 4)] == [1980, 34, 79, 34])
    check("maxMOLS(3,8) have no common transversals",
          dict(common_transversal_table(c8.species(3, True))) == {(0, 0): 38})
    check.finish()
