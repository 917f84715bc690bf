"""Lists of mutually orthogonal latin squares and their orthogonal arrays."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InvalidColumns, NotOrthogonal, ParseError, SizeMismatch
from .latin import LatinSquare, count_distinct_pairs, parse_squares
from . import plex


@dataclass(frozen=True)
class MolsList:
    """An ordered list of pairwise orthogonal squares of a common order."""

    squares: tuple

    def __post_init__(self):
        sq = tuple(self.squares)
        object.__setattr__(self, "squares", sq)
        if not sq:
            raise ValueError("a MOLS list needs at least one square")
        n = sq[0].order
        for L in sq:
            if L.order != n:
                raise SizeMismatch(f"squares of orders {n} and {L.order}")
        for i, j in combinations(range(len(sq)), 2):
            if count_distinct_pairs(sq[i], sq[j]) != n * n:
                raise NotOrthogonal(f"squares {i} and {j} are not orthogonal", (i, j))

    @property
    def order(self):
        return self.squares[0].order

    @property
    def k(self):
        return len(self.squares)

    def __len__(self):
        return len(self.squares)

    def __iter__(self):
        return iter(self.squares)

    def __getitem__(self, i):
        return self.squares[i]

    def __str__(self):
        return format_mols(self)


@dataclass(frozen=True)
class OrthogonalArray:
    """``n*n`` rows of ``width`` symbols; every column pair covers every ordered pair once."""

    order: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        n = self.order
        if len(rows) != n * n:
            raise SizeMismatch(f"expected {n * n} rows, got {len(rows)}")
        w = len(rows[0])
        for row in rows:
            if len(row) != w:
                raise SizeMismatch("rows of unequal width")
            for x in row:
                if not 0 <= x < n:
                    raise ValueError(f"symbol {x} out of range 0..{n - 1}")
        for a, b in combinations(range(w), 2):
            if len({(row[a], row[b]) for row in rows}) != n * n:
                raise NotOrthogonal(f"columns {a} and {b} repeat a pair", (a, b))

    @property
    def width(self):
        return len(self.rows[0])

    def permute_columns(self, perm):
        """Array whose column ``i`` is column ``perm[i]`` of this one."""
        return OrthogonalArray(self.order, tuple(tuple(row[p] for p in perm) for row in self.rows))

    def column(self, j):
        return tuple(row[j] for row in self.rows)


@dataclass(frozen=True)
class CommonTransversal:
    row_indices: frozenset

    def cells(self, n):
        return sorted(divmod(x, n) for x in self.row_indices)


def as_mols(M) -> MolsList:
    if isinstance(M, MolsList):
        return M
    if isinstance(M, LatinSquare):
        return MolsList((M,))
    return MolsList(tuple(M))


def to_oa(M) -> OrthogonalArray:
    M = as_mols(M)
    n = M.order
    rows = []
    for r in range(n):
        for c in range(n):
            rows.append((r, c) + tuple(L.cells[r * n + c] for L in M.squares))
    return OrthogonalArray(n, tuple(rows))


def from_oa(O: OrthogonalArray, row_col=(0, 1)) -> MolsList:
    a, b = row_col
    w = O.width
    if a == b or not (0 <= a < w and 0 <= b < w):
        raise InvalidColumns(f"need two distinct columns in 0..{w - 1}, got {row_col}")
    n = O.order
    rest = [j for j in range(w) if j not in (a, b)]
    grids = [[0] * (n * n) for _ in rest]
    for row in O.rows:
        pos = row[a] * n + row[b]
        for g, j in zip(grids, rest):
            g[pos] = row[j]
    return MolsList(tuple(LatinSquare(n, tuple(g)) for g in grids))


def aspects(M) -> list:
    """One square per 3-column choice of the array, lowest column as rows."""
    O = to_oa(M)
    out = []
    for cols in combinations(range(O.width), 3):
        sub = OrthogonalArray(O.order, tuple(tuple(row[j] for j in cols) for row in O.rows))
        out.append(from_oa(sub, (0, 1)).squares[0])
    return out


def common_transversals(M) -> list:
    """Common transversals in catalogue order, as sets of OA row indices (``r*n + c``)."""
    cat = plex.transversals(as_mols(M))
    n = cat.order
    out = []
    for i in range(len(cat)):
        cells = cat.cells(i)
        out.append(CommonTransversal(frozenset(b for b in range(n * n) if cells >> b & 1)))
    return out


def max_disjoint_common_transversals(M) -> int:
    cat = plex.transversals(as_mols(M))
    if len(cat) == 0:
        return 0
    return plex.max_disjoint(cat)


def _partition_square(cat, part):
    n = cat.order
    cells = [0] * (n * n)
    for t, idx in enumerate(part):
        for r in range(n):
            c = cat.row_cells(idx, r)[0]
            cells[r * n + c] = t
    return LatinSquare(n, tuple(cells))


def iter_extensions(M, limit=0):
    M = as_mols(M)
    cat = plex.transversals(M)
    for part in plex.enumerate_partitions(cat, 1, limit):
        yield MolsList(M.squares + (_partition_square(cat, part),))


def extend(M, limit=0) -> list:
    """Every ``(k+1)``-list obtained by adding a square with first row in order.

    Part ``t`` of each 1-partition is the transversal through cell ``(0, t)``
    and becomes symbol ``t`` of the new square.
    """
    return list(iter_extensions(M, limit))


def count_extensions(M) -> int:
    return plex.count_partitions(plex.transversals(as_mols(M)), 1)


def is_maximal(M) -> bool:
    return count_extensions(M) == 0


# -- text formats ------------------------------------------------------------

def format_mols(M) -> str:
    return "\n\n".join(str(L) for L in as_mols(M).squares) + "\n"


def parse_mols(text: str) -> MolsList:
    squares = parse_squares(text)
    if not squares:
        raise ParseError("no squares found")
    return MolsList(tuple(squares))


def format_oa(O: OrthogonalArray) -> str:
    lines = [f"{O.order} {O.width}"]
    lines += [" ".join(str(x) for x in row) for row in O.rows]
    return "\n".join(lines) + "\n"


def parse_oa(text: str) -> OrthogonalArray:
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty orthogonal array")
    lineno, head = lines[0]
    try:
        n, w = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise ParseError("header must be 'n width'", lineno) from None
    rows = []
    for lineno, toks in lines[1:]:
        if len(toks) != w:
            raise ParseError(f"expected {w} symbols", lineno)
        try:
            rows.append(tuple(int(t) for t in toks))
        except ValueError:
            raise ParseError("non-integer token", lineno) from None
    return OrthogonalArray(n, tuple(rows))
