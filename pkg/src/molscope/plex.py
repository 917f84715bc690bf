"""Bit-parallel enumeration of plexes and plex partitions.

A MOLS list ``L_1..L_k`` of order ``n`` is turned into a profile ``U`` with
``U[r, c] = 2**c + sum_i 2**(i*n + L_i[r, c])``: one bit for the column and
one for the symbol of every square.  A ``p``-plex is then a choice of ``p``
cells per row whose items are each hit exactly ``p`` times.  Plexes are
stored as ``n*n``-bit cell sets (bit ``r*n + c``) so disjointness is a
single AND.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import CatalogueOverflow, NoTransversals, SizeMismatch, WidthExceeded

WORD_BITS = 128
DEFAULT_CAP = 1 << 28


@dataclass(frozen=True)
class Profile:
    order: int
    k: int
    U: tuple  # row-major, one int per cell
    squares: tuple = field(repr=False)

    @property
    def width(self):
        return (self.k + 1) * self.order

    def __getitem__(self, rc):
        r, c = rc
        return self.U[r * self.order + c]


@dataclass(frozen=True)
class Plex:
    order: int
    p: int
    cells: int  # bit r*n + c

    def cell_list(self):
        n = self.order
        return [(b // n, b % n) for b in range(n * n) if self.cells >> b & 1]

    def row_columns(self, r):
        n = self.order
        return tuple(c for c in range(n) if self.cells >> (r * n + c) & 1)

    def __len__(self):
        return bin(self.cells).count("1")

    def isdisjoint(self, other):
        return not self.cells & other.cells


def _squares_of(M):
    from .latin import LatinSquare

    if isinstance(M, LatinSquare):
        return (M,)
    return tuple(M.squares)


def build_profile(M) -> Profile:
    """Bitstring profile of a square or a MOLS list."""
    squares = _squares_of(M)
    n = squares[0].order
    k = len(squares)
    if any(L.order != n for L in squares):
        raise SizeMismatch("squares of different orders")
    if (k + 1) * n > WORD_BITS:
        raise WidthExceeded(f"(k+1)*n = {(k + 1) * n} exceeds {WORD_BITS} bits")
    U = []
    for r in range(n):
        for c in range(n):
            w = 1 << c
            for i, L in enumerate(squares, 1):
                w |= 1 << (i * n + L.cells[r * n + c])
            U.append(w)
    return Profile(n, k, tuple(U), squares)


class PlexCatalogue:
    """All ``p``-plexes of a profile in lexicographic order of per-row choices.

    ``skip[i, r]`` is the index of the first plex after ``i`` whose cells in
    row ``r`` differ from those of plex ``i``.
    """

    def __init__(self, profile, p, choices, combos):
        self.profile = profile
        self.order = profile.order
        self.p = p
        self.choices = choices  # (N, n) index into combos[r]
        self.combos = combos  # per row: list of column tuples
        n = self.order
        combo_cells = np.zeros((n, len(combos[0]), 2), dtype=np.uint64)
        for r in range(n):
            for j, cols in enumerate(combos[r]):
                for c in cols:
                    b = r * n + c
                    combo_cells[r, j, b // 64] |= np.uint64(1) << np.uint64(b % 64)
        self.words = _kernels.cell_words(choices, combo_cells)
        self.skip = _kernels.skip_table(choices)
        first = np.array([combos[0][j][0] for j in range(len(combos[0]))], dtype=np.int64)
        self.row0_col = first[choices[:, 0]] if len(choices) else np.zeros(0, dtype=np.int64)
        # bucket c: plexes whose leftmost row-0 cell is (0, c); contiguous by ordering
        self.bucket_start = np.searchsorted(self.row0_col, np.arange(n + 1), side="left").astype(np.int64)
        self.bucket_end = np.searchsorted(self.row0_col, np.arange(n + 1), side="right").astype(np.int64)

    def __len__(self):
        return len(self.choices)

    def cells(self, i):
        return int(self.words[i, 0]) | int(self.words[i, 1]) << 64

    def __getitem__(self, i):
        if i < 0:
            i += len(self)
        return Plex(self.order, self.p, self.cells(i))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @cached_property
    def plexes(self):
        return tuple(self)

    def row_cells(self, i, r):
        return self.combos[r][self.choices[i, r]]


def _combos(n, p):
    return [list(combinations(range(n), p)) for _ in range(n)]


def _enumerate_python(profile, p, combos, cap):
    """Reference enumerator on arbitrary-width Python integers."""
    n = profile.order
    U = profile.U
    masks = [[0] * len(combos[r]) for r in range(n)]
    for r in range(n):
        for j, cols in enumerate(combos[r]):
            m = 0
            for c in cols:
                m |= U[r * n + c]
            masks[r][j] = m
    out = []
    choice = [0] * n
    full = (1 << profile.width) - 1

    def rec(r, occ):
        # occ[i]: items represented at least i times
        for j, x in enumerate(masks[r]):
            if x & occ[p]:
                continue
            nxt = [full] + [occ[i] | (occ[i - 1] & x) for i in range(1, p + 1)]
            choice[r] = j
            if r == n - 1:
                if len(out) >= cap:
                    raise CatalogueOverflow(f"more than {cap} plexes")
                out.append(tuple(choice))
            else:
                rec(r + 1, nxt)

    rec(0, [full] + [0] * p)
    return np.array(out, dtype=np.int16).reshape(len(out), n)


def enumerate_plexes(prof: Profile, p: int = 1, cap: int = DEFAULT_CAP, backend: str = "auto") -> PlexCatalogue:
    """Catalogue of every ``p``-plex of ``prof``.

    ``backend`` is ``"auto"`` (compiled 64-bit path when the profile fits),
    ``"native"`` or ``"python"``.  Raises :class:`CatalogueOverflow` beyond
    ``cap`` plexes.
    """
    n = prof.order
    if not 1 <= p <= n:
        raise ValueError(f"p must lie in 1..{n}, got {p}")
    combos = _combos(n, p)
    if backend == "auto":
        backend = "native" if prof.width <= 64 else "python"
    if backend == "native":
        if prof.width > 64:
            raise WidthExceeded("native backend needs (k+1)*n <= 64")
        masks = np.zeros((n, len(combos[0])), dtype=np.uint64)
        for r in range(n):
            for j, cols in enumerate(combos[r]):
                m = 0
                for c in cols:
                    m |= prof.U[r * n + c]
                masks[r, j] = m
        ncombos = np.full(n, len(combos[0]), dtype=np.int64)
        choices, status = _kernels.enumerate_plexes(masks, ncombos, p, cap)
        if status:
            raise CatalogueOverflow(f"more than {cap} plexes")
    elif backend == "python":
        choices = _enumerate_python(prof, p, combos, cap)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return PlexCatalogue(prof, p, np.ascontiguousarray(choices), combos)


def transversals(M, **kw) -> PlexCatalogue:
    return enumerate_plexes(build_profile(M), 1, **kw)


def _check_partition_args(cat, p):
    if p is None:
        p = cat.p
    if p != cat.p:
        raise ValueError(f"catalogue holds {cat.p}-plexes, asked for p={p}")
    if cat.order % p:
        raise ValueError(f"p={p} does not divide n={cat.order}")
    return p


def count_partitions(cat: PlexCatalogue, p: int | None = None) -> int:
    """Number of partitions of the cells into ``n/p`` disjoint plexes of the catalogue."""
    p = _check_partition_args(cat, p)
    if len(cat) == 0:
        return 0
    count, _ = _kernels.partitions(cat.words, cat.skip, cat.bucket_start, cat.bucket_end,
                                   cat.order, p, False, 0)
    return int(count)


def enumerate_partitions(cat: PlexCatalogue, p: int | None = None, limit: int = 0):
    """Partitions as tuples of catalogue indices, ordered by their row-0 cells."""
    p = _check_partition_args(cat, p)
    if len(cat) == 0:
        return []
    _, rec = _kernels.partitions(cat.words, cat.skip, cat.bucket_start, cat.bucket_end,
                                 cat.order, p, True, limit)
    return [tuple(int(x) for x in row) for row in rec]


def theta(L) -> int:
    """Number of 1-partitions, i.e. orthogonal mates with first row in natural order."""
    return count_partitions(transversals(L), 1)


def max_disjoint(cat: PlexCatalogue) -> int:
    if cat.p != 1:
        raise ValueError("max_disjoint needs a transversal catalogue")
    return int(_kernels.max_disjoint(cat.words, cat.skip, cat.row0_col, cat.bucket_start, cat.order))


def transversal_orbits(cat: PlexCatalogue, cell_perms):
    """Orbit label per transversal under permutations of the ``n*n`` cells."""
    index = {cat.cells(i): i for i in range(len(cat))}
    n2 = cat.order ** 2
    parent = list(range(len(cat)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in cell_perms:
        for i in range(len(cat)):
            src = cat.cells(i)
            img = 0
            for b in range(n2):
                if src >> b & 1:
                    img |= 1 << perm[b]
            j = index[img]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    labels = {}
    out = np.empty(len(cat), dtype=np.int64)
    for i in range(len(cat)):
        out[i] = labels.setdefault(find(i), len(labels))
    return out, len(labels)


def alpha(L, symmetries=None) -> int:
    """Smallest size of an inclusion-maximal family of disjoint transversals.

    ``symmetries`` may supply cell permutations (autoparatopisms acting on
    cells) to break symmetry at the root of the search; when omitted they
    are computed with the canonical-labelling module.
    """
    cat = transversals(L)
    if len(cat) == 0:
        raise NoTransversals("square has no transversals")
    if symmetries is None:
        from .canonical import cell_automorphisms

        symmetries = cell_automorphisms(L)
    orbit, norb = transversal_orbits(cat, symmetries)
    return int(_kernels.alpha(cat.words, cat.order, orbit, norb))
