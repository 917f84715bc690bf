"""Latin squares: representation, validation, symmetry actions and invariants.

Rows, columns and symbols are indexed ``0..n-1`` throughout.  A square is
stored row-major as a tuple of ``n*n`` symbols so that it can be hashed and
compared cheaply.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadSymbol,
    DuplicateInColumn,
    DuplicateInRow,
    LatinSquareError,
    ParseError,
    SizeMismatch,
)

MAX_ORDER = 10


@dataclass(frozen=True)
class LatinSquare:
    """An ``n x n`` latin square.

    The constructor does not check the latin property; use :func:`validate`
    for untrusted input.
    """

    order: int
    cells: tuple

    def __getitem__(self, rc):
        r, c = rc
        return self.cells[r * self.order + c]

    @property
    def rows(self):
        n = self.order
        return tuple(self.cells[r * n:(r + 1) * n] for r in range(n))

    @classmethod
    def from_rows(cls, rows):
        rows = [tuple(int(x) for x in row) for row in rows]
        return cls(len(rows), tuple(x for row in rows for x in row))

    def as_array(self):
        return np.array(self.cells, dtype=np.int64).reshape(self.order, self.order)

    def transpose(self):
        n = self.order
        return LatinSquare(n, tuple(self.cells[c * n + r] for r in range(n) for c in range(n)))

    def conjugate(self, perm):
        """Return the conjugate obtained by permuting the roles of (row, col, symbol).

        ``perm`` is a permutation of ``(0, 1, 2)``; triple ``t`` of the square
        becomes triple ``(t[perm[0]], t[perm[1]], t[perm[2]])``.
        """
        n = self.order
        out = [0] * (n * n)
        for r in range(n):
            for c in range(n):
                t = (r, c, self.cells[r * n + c])
                out[t[perm[0]] * n + t[perm[1]]] = t[perm[2]]
        return LatinSquare(n, tuple(out))

    def __str__(self):
        return format_square(self)


@dataclass(frozen=True)
class Isotopism:
    row_perm: tuple
    col_perm: tuple
    sym_perm: tuple

    def __post_init__(self):
        n = len(self.row_perm)
        for p in (self.row_perm, self.col_perm, self.sym_perm):
            if len(p) != n or sorted(p) != list(range(n)):
                raise ValueError(f"not a permutation of 0..{n - 1}: {p}")

    @property
    def order(self):
        return len(self.row_perm)

    @classmethod
    def identity(cls, n):
        e = tuple(range(n))
        return cls(e, e, e)

    @classmethod
    def random(cls, n, rng=None):
        rng = rng or random
        perms = []
        for _ in range(3):
            p = list(range(n))
            rng.shuffle(p)
            perms.append(tuple(p))
        return cls(*perms)

    def then(self, other):
        """Composite isotopism: apply ``self`` first, then ``other``."""
        return Isotopism(
            tuple(other.row_perm[x] for x in self.row_perm),
            tuple(other.col_perm[x] for x in self.col_perm),
            tuple(other.sym_perm[x] for x in self.sym_perm),
        )

    def inverse(self):
        def inv(p):
            out = [0] * len(p)
            for i, x in enumerate(p):
                out[x] = i
            return tuple(out)

        return Isotopism(inv(self.row_perm), inv(self.col_perm), inv(self.sym_perm))


def validate(grid) -> LatinSquare:
    """Check that ``grid`` (a sequence of rows) is a latin square and wrap it."""
    rows = [list(row) for row in grid]
    n = len(rows)
    if n == 0 or n > MAX_ORDER:
        raise SizeMismatch(f"order must be between 1 and {MAX_ORDER}, got {n}")
    for r, row in enumerate(rows):
        if len(row) != n:
            raise SizeMismatch(f"row {r} has {len(row)} entries, expected {n}")
        for c, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)) or not 0 <= x < n:
                raise BadSymbol(f"entry ({r},{c}) = {x!r} is not a symbol in 0..{n - 1}", (r, c))
    for r, row in enumerate(rows):
        if len(set(row)) != n:
            raise DuplicateInRow(f"row {r} repeats a symbol", r)
    for c in range(n):
        if len({rows[r][c] for r in range(n)}) != n:
            raise DuplicateInColumn(f"column {c} repeats a symbol", c)
    return LatinSquare.from_rows(rows)


def is_latin(grid) -> bool:
    try:
        validate(grid)
    except (LatinSquareError, SizeMismatch):
        return False
    return True


def apply_isotopism(L: LatinSquare, t: Isotopism) -> LatinSquare:
    n = L.order
    if t.order != n:
        raise SizeMismatch(f"isotopism of degree {t.order} applied to square of order {n}")
    out = [0] * (n * n)
    rp, cp, sp = t.row_perm, t.col_perm, t.sym_perm
    cells = L.cells
    for r in range(n):
        base = rp[r] * n
        for c in range(n):
            out[base + cp[c]] = sp[cells[r * n + c]]
    return LatinSquare(n, tuple(out))


def reduce(L: LatinSquare):
    """Return ``(R, t)`` with ``R = apply_isotopism(L, t)`` reduced.

    Symbols are relabelled so row 0 reads ``0..n-1``, then rows are sorted by
    their entry in column 0.
    """
    n = L.order
    sym = [0] * n
    for c in range(n):
        sym[L.cells[c]] = c
    row = [sym[L.cells[r * n]] for r in range(n)]
    t = Isotopism(tuple(row), tuple(range(n)), tuple(sym))
    return apply_isotopism(L, t), t


def is_reduced(L: LatinSquare) -> bool:
    n = L.order
    return all(L.cells[c] == c for c in range(n)) and all(L.cells[r * n] == r for r in range(n))


def count_intercalates(L: LatinSquare) -> int:
    """Number of 2x2 latin subsquares.

    For each pair of rows, intercalates are exactly the 2-cycles of the
    permutation taking a column to the column holding the same symbol in the
    other row.
    """
    n = L.order
    rows = L.rows
    total = 0
    for r1, r2 in combinations(range(n), 2):
        where = [0] * n
        for c, x in enumerate(rows[r2]):
            where[x] = c
        a = rows[r1]
        for c in range(n):
            d = where[a[c]]
            if d > c and where[a[d]] == c:
                total += 1
    return total


def count_subsquares(L: LatinSquare, m: int) -> int:
    """Number of ``m x m`` latin subsquares, ``2 <= m <= n/2``."""
    n = L.order
    if not 2 <= m <= n // 2:
        raise ValueError(f"subsquare order must satisfy 2 <= m <= {n // 2}, got {m}")
    rows = L.rows
    total = 0
    for rset in combinations(range(n), m):
        groups = {}
        for c in range(n):
            key = frozenset(rows[r][c] for r in rset)
            if len(key) == m:
                groups[key] = groups.get(key, 0) + 1
        # at most m columns can share a symbol set on m rows
        total += sum(1 for v in groups.values() if v == m)
    return total


def count_distinct_pairs(A: LatinSquare, B: LatinSquare) -> int:
    if A.order != B.order:
        raise SizeMismatch(f"orders differ: {A.order} vs {B.order}")
    return len(set(zip(A.cells, B.cells)))


def is_orthogonal(A: LatinSquare, B: LatinSquare) -> bool:
    return count_distinct_pairs(A, B) == A.order * A.order


def preserves(L: LatinSquare, perm: Sequence[int]) -> bool:
    """True if applying ``perm`` uniformly to rows, columns and symbols fixes ``L``."""
    t = Isotopism(tuple(perm), tuple(perm), tuple(perm))
    return apply_isotopism(L, t) == L


# -- constructions ---------------------------------------------------------

def cyclic(n: int) -> LatinSquare:
    """Cayley table of the cyclic group of order ``n``."""
    return LatinSquare(n, tuple((r + c) % n for r in range(n) for c in range(n)))


def linear(n: int, x: int) -> LatinSquare:
    """Square with entry ``x*i + j mod n`` in cell ``(i, j)``."""
    return LatinSquare(n, tuple((x * i + j) % n for i in range(n) for j in range(n)))


def elementary_abelian(n: int) -> LatinSquare:
    """Cayley table of the elementary abelian group of order 1, 2, 3, 4, 5, 7, 8 or 9."""
    if n & (n - 1) == 0:
        return LatinSquare(n, tuple(r ^ c for r in range(n) for c in range(n)))
    if n == 9:
        def add(a, b):
            return 3 * ((a // 3 + b // 3) % 3) + (a % 3 + b % 3) % 3

        return LatinSquare(9, tuple(add(r, c) for r in range(9) for c in range(9)))
    if n in (3, 5, 7):
        return cyclic(n)
    raise ValueError(f"no elementary abelian group of order {n}")


FANO_LINES = ((0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2))


def steiner_quasigroup_7() -> LatinSquare:
    """Idempotent Steiner quasigroup on the Fano plane: ``x*y`` completes the line."""
    third = {}
    for line in FANO_LINES:
        for a, b in permutations(line, 2):
            third[a, b] = next(z for z in line if z not in (a, b))
    return LatinSquare(7, tuple(r if r == c else third[r, c] for r in range(7) for c in range(7)))


def random_latin_square(n: int, rng=None, steps=None) -> LatinSquare:
    """Approximately uniform random latin square via the Jacobson-Matthews chain."""
    rng = rng or random.Random()
    if n <= 2:
        base = cyclic(n)
        t = Isotopism.random(n, rng)
        return apply_isotopism(base, t)
    steps = steps if steps is not None else n ** 3
    # incidence cube: cube[r][c][s] in {-1, 0, 1}
    cube = [[[1 if (r + c) % n == s else 0 for s in range(n)] for c in range(n)] for r in range(n)]
    improper = None
    done = 0
    while done < steps or improper is not None:
        if improper is None:
            while True:
                r, c, s = rng.randrange(n), rng.randrange(n), rng.randrange(n)
                if cube[r][c][s] == 0:
                    break
            r1 = next(i for i in range(n) if cube[i][c][s] == 1)
            c1 = next(j for j in range(n) if cube[r][j][s] == 1)
            s1 = next(k for k in range(n) if cube[r][c][k] == 1)
        else:
            r, c, s = improper
            r1 = rng.choice([i for i in range(n) if cube[i][c][s] == 1])
            c1 = rng.choice([j for j in range(n) if cube[r][j][s] == 1])
            s1 = rng.choice([k for k in range(n) if cube[r][c][k] == 1])
        cube[r][c][s] += 1
        cube[r][c1][s1] += 1
        cube[r1][c][s1] += 1
        cube[r1][c1][s] += 1
        cube[r][c][s1] -= 1
        cube[r][c1][s] -= 1
        cube[r1][c][s] -= 1
        cube[r1][c1][s1] -= 1
        improper = (r1, c1, s1) if cube[r1][c1][s1] < 0 else None
        done += 1
    cells = tuple(next(s for s in range(n) if cube[r][c][s] == 1) for r in range(n) for c in range(n))
    return LatinSquare(n, cells)


# -- text format -----------------------------------------------------------

def format_square(L: LatinSquare) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in L.rows)


def _blocks(text: str):
    """Yield ``(first_line_number, rows)`` for each blank-line separated block."""
    block, start = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            if block:
                yield start, block
            block, start = [], None
            continue
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if start is None:
            start = lineno
        block.append(row)
    if block:
        yield start, block


def parse_squares(text: str) -> list:
    """Parse blank-line separated squares, ignoring ``#`` comment lines.

    A block of ``m*n`` rows is split into ``m`` consecutive squares, so a MOLS
    file may omit the separating blank lines.
    """
    squares = []
    for start, rows in _blocks(text):
        n = len(rows[0])
        if len(rows) % n:
            raise ParseError(f"block of {len(rows)} rows is not a multiple of the order {n}", start)
        for i in range(0, len(rows), n):
            try:
                squares.append(validate(rows[i:i + n]))
            except (LatinSquareError, SizeMismatch) as exc:
                raise ParseError(str(exc), start + i) from exc
    return squares


def read_squares(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_squares(fh.read())


def iter_square_text(squares: Iterable[LatinSquare]) -> str:
    return "\n\n".join(format_square(L) for L in squares) + "\n"
