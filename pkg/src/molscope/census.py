"""End-to-end census of latin squares and MOLS of small order.

Species representatives of latin squares are generated by listing every
reduced square and sweeping species orbits (orders up to 7); larger orders
take a file of representatives.  MOLS species are then grown one square at a
time by extension and deduplicated by canonical certificate.  Class counts
for lists and sets under isotopism and trisotopism follow from the group of
column permutations induced by each species' autoparatopisms.
"""

from __future__ import annotations

import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import factorial
from pathlib import Path

import numpy as np

from . import _kernels, golden
from .canonical import (
    EquivalenceMode,
    _closure,
    classes_in_species,
    label_array,
)
from .counting import FACT, random_ls_stats, reduced_sets_from_reps
from .errors import UnsupportedOrder
from .latin import LatinSquare, count_intercalates, format_square, read_squares
from .mols import MolsList, as_mols, aspects, from_oa, iter_extensions, max_disjoint_common_transversals, to_oa
from . import plex

log = logging.getLogger(__name__)

MAX_GENERATED_ORDER = 7
HI_CELLS = 21  # inner-block cells packed into the first key word


@dataclass
class SpeciesEntry:
    """One species of ``k``-MOLS: representative plus the data the tables need."""

    mols: MolsList
    key: str
    par: int
    column_perms: frozenset = field(repr=False)
    maximal: bool | None = None
    n_extensions: int | None = None
    theta: int | None = None
    transversals: int | None = None
    intercalates: int | None = None

    @property
    def k(self):
        return self.mols.k

    @property
    def atp(self):
        return self.par // len(self.column_perms)

    def sort_key(self):
        return tuple(x for L in self.mols.squares for x in L.cells)


@dataclass
class SpeciesCatalogue:
    order: int
    entries: dict  # certificate hex -> SpeciesEntry

    def __len__(self):
        return len(self.entries)

    def reps(self):
        return sorted(self.entries.values(), key=SpeciesEntry.sort_key)


@dataclass(frozen=True)
class CensusRow:
    n: int
    k: int
    kind: str  # "list" or "set"
    maximal_only: bool
    equality: int
    isotopism: int
    trisotopism: int
    paratopism: int

    def values(self):
        return (self.equality, self.isotopism, self.trisotopism, self.paratopism)


# -- species representatives of latin squares -------------------------------

def _decode(n, hi, lo, hi_cells):
    inner = (n - 2) ** 2
    m = inner - hi_cells
    vals = [(int(hi) >> 3 * (hi_cells - 1 - j)) & 7 for j in range(hi_cells)]
    vals += [(int(lo) >> 3 * (m - 1 - j)) & 7 for j in range(m)]
    g = [[0] * n for _ in range(n)]
    for c in range(n):
        g[0][c] = c
    for r in range(n):
        g[r][0] = r
    j = 0
    for r in range(1, n - 1):
        for c in range(1, n - 1):
            g[r][c] = vals[j]
            j += 1
    full = set(range(n))
    for r in range(1, n - 1):
        g[r][n - 1] = (full - set(g[r][:n - 1])).pop()
    for c in range(1, n):
        g[n - 1][c] = (full - {g[r][c] for r in range(n - 1)}).pop()
    return LatinSquare.from_rows(g)


def reduced_square_keys(n):
    if not 2 <= n <= 8:
        raise UnsupportedOrder(f"reduced square listing supports 2 <= n <= 8, got {n}")
    hi_cells = min((n - 2) ** 2, HI_CELLS)
    return _kernels.reduced_squares(n, hi_cells), hi_cells


def species_representatives(n):
    """Lexicographically least reduced square of every species of order ``n``.

    Also returns the number of reduced squares listed, as a crosscheck.
    """
    if n == 1:
        return [LatinSquare(1, (0,))], 1
    if n > MAX_GENERATED_ORDER:
        raise UnsupportedOrder(f"species generation is limited to n <= {MAX_GENERATED_ORDER}; supply a file")
    keys, hi_cells = reduced_square_keys(n)
    seen = np.zeros(len(keys), dtype=np.bool_)
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    reps = []
    pos = 0
    marked = 0
    while pos < len(keys):
        pos += int(np.argmin(seen[pos:]))
        if seen[pos]:
            break
        if n == 2:
            L = LatinSquare(2, (0, 1, 1, 0))
        else:
            L = _decode(n, keys[pos, 0], keys[pos, 1], hi_cells)
        got = _kernels.mark_species(keys, seen, L.as_array(), perms, hi_cells)
        if got < 0:
            raise RuntimeError("species sweep produced a square missing from the listing")
        marked += got
        reps.append(L)
    if marked != len(keys):
        raise RuntimeError(f"marked {marked} of {len(keys)} reduced squares")
    return reps, len(keys)


def _label_species(M):
    M = as_mols(M)
    mode = EquivalenceMode.SPECIES_LS if M.k == 1 else EquivalenceMode.SPECIES_MOLS
    O = to_oa(M)
    res = label_array(O, mode)
    w = O.width
    colperms = frozenset(_closure({tuple(g[:w]) for g in res.generators}, w))
    return res.certificate.hex(), res.group_order, colperms


def _square_entry(L):
    key, par, colperms = _label_species(L)
    cat = plex.transversals(L)
    theta = plex.count_partitions(cat, 1) if len(cat) else 0
    return SpeciesEntry(MolsList((L,)), key, par, colperms, maximal=theta == 0,
                        n_extensions=theta, theta=theta, transversals=len(cat),
                        intercalates=count_intercalates(L))


def _pool_map(func, items, threads):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(func, items, chunksize=max(1, len(items) // (4 * threads))))


def _merge(entries):
    """Certificate -> entry, keeping the lexicographically least representative."""
    out = {}
    for e in entries:
        cur = out.get(e.key)
        if cur is None or e.sort_key() < cur.sort_key():
            out[e.key] = e
    return out


def generate_species_reps(n, threads=1, reps=None) -> SpeciesCatalogue:
    """Species catalogue of latin squares of order ``n``.

    ``reps`` may supply representatives (one per species) instead of
    generating them; duplicates are merged by certificate.
    """
    if reps is None:
        reps, _ = species_representatives(n)
    entries = _pool_map(_square_entry, reps, threads)
    return SpeciesCatalogue(n, _merge(entries))


# -- MOLS census --------------------------------------------------------------

def _children(entry):
    """Species entries of every extension of one representative."""
    out = []
    for M in iter_extensions(entry.mols):
        key, par, colperms = _label_species(M)
        out.append(SpeciesEntry(M, key, par, colperms))
    return out


@dataclass
class Census:
    order: int
    levels: dict  # k -> list of SpeciesEntry sorted by representative

    def species(self, k, maximal_only=False):
        reps = self.levels.get(k, [])
        return [e for e in reps if e.maximal] if maximal_only else list(reps)

    @property
    def kmax(self):
        return max(self.levels)


def build_mols_census(n, k_max=None, threads=1, catalogue=None, checkpoint=None) -> Census:
    """Species of ``k``-MOLS of order ``n`` for every ``k``, grown breadth first.

    ``checkpoint``, if given, is a directory holding finished levels so an
    interrupted run resumes at the first missing level.
    """
    if k_max is None:
        k_max = n - 1
    if catalogue is None:
        catalogue = generate_species_reps(n, threads)
    levels = {1: catalogue.reps()}
    for k in range(1, k_max):
        parents = levels[k]
        cached = _load_level(checkpoint, n, k + 1, parents) if checkpoint else None
        if cached is not None:
            children, counts = cached
        else:
            batches = _pool_map(_children, parents, threads)
            counts = [len(b) for b in batches]
            children = sorted(_merge(e for b in batches for e in b).values(), key=SpeciesEntry.sort_key)
            if checkpoint:
                _save_level(checkpoint, n, k + 1, children, counts)
        for e, c in zip(parents, counts):
            e.n_extensions = c
            e.maximal = c == 0
        log.info("n=%d k=%d: %d species", n, k + 1, len(children))
        if not children:
            break
        levels[k + 1] = children
    top = max(levels)
    if top == k_max or top == n - 1:
        for e in levels[top]:
            if e.maximal is None:
                e.n_extensions = plex.count_partitions(plex.transversals(e.mols), 1) if top < n - 1 else 0
                e.maximal = e.n_extensions == 0
    return Census(n, levels)


def _level_path(checkpoint, n, k):
    return Path(checkpoint) / f"n{n}" / f"level{k}.json"


def _save_level(checkpoint, n, k, children, counts):
    path = _level_path(checkpoint, n, k)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {
        "parent_extensions": counts,
        "species": [
            {"key": e.key, "par": e.par, "cells": [list(L.cells) for L in e.mols.squares],
             "columns": sorted(list(p) for p in e.column_perms)}
            for e in children
        ],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data))
    os.replace(tmp, path)


def _load_level(checkpoint, n, k, parents):
    path = _level_path(checkpoint, n, k)
    if not path.exists():
        return None
    data = json.loads(path.read_text())
    if len(data["parent_extensions"]) != len(parents):
        return None
    children = []
    for s in data["species"]:
        M = MolsList(tuple(LatinSquare(n, tuple(c)) for c in s["cells"]))
        children.append(SpeciesEntry(M, s["key"], s["par"], frozenset(tuple(p) for p in s["columns"])))
    return children, data["parent_extensions"]


# -- classification -----------------------------------------------------------

def classify_counts(n, k, entries, kind="set", maximal_only=False) -> CensusRow:
    """Counts of reduced objects and classes for one ``(n, k)`` species list."""
    if kind not in ("list", "set"):
        raise ValueError("kind must be 'list' or 'set'")
    entries = list(entries)
    rs = reduced_sets_from_reps(n, k, [e.par for e in entries]) if entries else 0
    equality = rs * FACT[k - 1] if kind == "list" else rs
    iso = sum(classes_in_species(e.column_perms, "isotopism", kind) for e in entries)
    tri = sum(classes_in_species(e.column_perms, "trisotopism", kind) for e in entries)
    return CensusRow(n, k, kind, maximal_only, equality, iso, tri, len(entries))


def census_rows(census: Census):
    """All rows of the four census tables, keyed like :data:`golden.CENSUS_TABLES`."""
    n = census.order
    out = {name: {} for name in golden.CENSUS_TABLES}
    for k in sorted(census.levels):
        for maximal_only in (True, False):
            entries = census.species(k, maximal_only)
            if not entries:
                continue
            for kind in ("set", "list"):
                row = classify_counts(n, k, entries, kind, maximal_only)
                name = ("maxmols_" if maximal_only else "mols_") + kind + "s"
                out[name][(n, k)] = row
    return out


def compare_with_golden(rows):
    """List of ``(table, n, k, computed, expected)`` for every mismatched or missing row."""
    bad = []
    for name, table in rows.items():
        expected_rows = golden.CENSUS_TABLES[name]
        orders = {n for n, _ in table}
        for (n, k), row in table.items():
            exp = expected_rows.get((n, k))
            if exp != row.values():
                bad.append((name, n, k, row.values(), exp))
        for (n, k), exp in expected_rows.items():
            if n in orders and (n, k) not in table:
                bad.append((name, n, k, None, exp))
    return bad


def common_transversal_table(entries) -> Counter:
    """Histogram over ``(#common transversals, max #disjoint)``."""
    out = Counter()
    for e in entries:
        cat = plex.transversals(e.mols)
        disjoint = plex.max_disjoint(cat) if len(cat) else 0
        out[len(cat), disjoint] += 1
    return out


def square_species_key(L) -> str:
    return label_array(L, EquivalenceMode.SPECIES_LS).certificate.hex()


def species_involvement_table(entries) -> Counter:
    """Histogram over the number of distinct latin square species among the aspects."""
    out = Counter()
    for e in entries:
        out[len({square_species_key(A) for A in aspects(e.mols)})] += 1
    return out


def planar_species_keys(census: Census) -> set:
    """Species keys of every square occurring in a complete set of MOLS."""
    n = census.order
    keys = set()
    for e in census.levels.get(n - 1, []):
        keys.update(square_species_key(A) for A in aspects(e.mols))
    return keys


def _planarity_of(squares, planar):
    flags = {square_species_key(L) in planar for L in squares}
    if flags == {True}:
        return "P"
    if flags == {False}:
        return "N"
    return "M"


def planarity_type(M, planar_keys) -> str:
    """``P`` if every square of ``M`` is planar, ``N`` if none is, else ``M``."""
    M = as_mols(M)
    if M.order >= 9:
        raise UnsupportedOrder("planar species of order 9 and above are not catalogued")
    return _planarity_of(M.squares, planar_keys)


def species_planarity_types(M, planar_keys) -> str:
    """Types met when any two array columns index rows and columns, e.g. ``"NM"``."""
    M = as_mols(M)
    if M.order >= 9:
        raise UnsupportedOrder("planar species of order 9 and above are not catalogued")
    O = to_oa(M)
    found = set()
    for a, b in combinations(range(O.width), 2):
        found.add(_planarity_of(from_oa(O, (a, b)).squares, planar_keys))
    return "".join(t for t in "PNM" if t in found)


def planarity_table(census: Census, k) -> Counter:
    planar = planar_species_keys(census)
    return Counter(species_planarity_types(e.mols, planar) for e in census.species(k, True))


def log2_theta_table(catalogue_entries) -> Counter:
    return Counter(e.theta.bit_length() - 1 for e in catalogue_entries if e.theta)


def random_stats(catalogue_entries):
    """(proportion of species with a mate, P(mate), E(theta)) over a complete species list."""
    from fractions import Fraction

    entries = list(catalogue_entries)
    p_mate, e_theta = random_ls_stats((e.theta, e.par) for e in entries)
    prop = Fraction(sum(1 for e in entries if e.theta), len(entries))
    return prop, p_mate, e_theta


def total_squares_check(catalogue_entries, n) -> bool:
    """Species sizes add up to ``n! (n-1)!`` times the reduced count."""
    total = sum(6 * FACT[n] ** 3 // e.par for e in catalogue_entries)
    return total == FACT[n] * FACT[n - 1] * golden.REDUCED_COUNT[n]


# -- output ------------------------------------------------------------------

def write_species_file(path, entries):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    chunks = []
    for e in entries:
        head = f"# {e.key} par={e.par}"
        if e.theta is not None:
            head += f" transversals={e.transversals} theta={e.theta}"
        body = "\n\n".join(format_square(L) for L in e.mols.squares)
        chunks.append(head + "\n" + body)
    path.write_text("\n\n".join(chunks) + "\n")


def read_species_reps(path):
    return read_squares(path)


def _tsv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["\t".join(header)] + ["\t".join(str(x) for x in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


def write_tables(out_dir, census: Census, catalogue_entries):
    """Write species files and every table; returns the computed census rows."""
    out = Path(out_dir)
    n = census.order
    for k, entries in census.levels.items():
        write_species_file(out / f"n{n}" / ("species.txt" if k == 1 else f"mols{k}.txt"), entries)
    tables = out / "tables"
    rows = census_rows(census)
    for name, table in rows.items():
        _tsv(tables / f"{name}_n{n}.tsv", ["n", "k", "equality", "isotopism", "trisotopism", "paratopism"],
             [(r.n, r.k) + r.values() for _, r in sorted(table.items())])
    ct = []
    inv = []
    for k in sorted(census.levels):
        if k < 2:
            continue
        maximal = census.species(k, True)
        for (c, d), m in sorted(common_transversal_table(maximal).items()):
            ct.append((n, k, c, d, m))
        for s, m in sorted(species_involvement_table(maximal).items()):
            inv.append((n, k, s, m))
    _tsv(tables / f"common_transversals_n{n}.tsv", ["n", "k", "common", "max_disjoint", "species"], ct)
    _tsv(tables / f"species_involved_n{n}.tsv", ["n", "k", "ls_species", "mols_species"], inv)
    if n <= 8:
        pl = []
        for k in sorted(census.levels):
            for t, m in sorted(planarity_table(census, k).items()):
                pl.append((n, k, t, m))
        _tsv(tables / f"planarity_n{n}.tsv", ["n", "k", "types", "species"], pl)
    prop, p_mate, e_theta = random_stats(catalogue_entries)
    _tsv(tables / f"random_ls_n{n}.tsv", ["n", "species_with_mate", "p_mate", "expected_mates"],
         [(n, prop, p_mate, e_theta)])
    _tsv(tables / f"log2_theta_n{n}.tsv", ["n", "r", "species"],
         [(n, r, m) for r, m in sorted(log2_theta_table(catalogue_entries).items())])
    return rows


def run_census(n, out_dir, k_max=None, threads=1, reps_file=None, extended=False):
    """Full pipeline for one order.  Returns ``(census, rows, mismatches)``."""
    if n > MAX_GENERATED_ORDER and reps_file is None:
        raise UnsupportedOrder(f"order {n} needs a representatives file")
    if n >= 8 and not extended:
        raise UnsupportedOrder(f"order {n} runs only in extended mode")
    reps = read_species_reps(reps_file) if reps_file else None
    catalogue = generate_species_reps(n, threads, reps)
    checkpoint = Path(out_dir) / "checkpoint"
    census = build_mols_census(n, k_max, threads, catalogue, checkpoint)
    rows = write_tables(out_dir, census, census.levels[1])
    bad = compare_with_golden(rows)
    return census, rows, bad
