"""Dancing-links exact cover solver, kept independent of the plex search.

Used as a slow but simple second route to transversals and 1-partitions.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ExactCoverInstance:
    n_items: int
    subsets: tuple  # tuple of sorted item tuples
    labels: tuple = ()  # optional payload per subset

    def __post_init__(self):
        for s in self.subsets:
            for x in s:
                if not 0 <= x < self.n_items:
                    raise ValueError(f"item {x} outside universe of {self.n_items}")


class _Links:
    """Knuth's toroidal doubly linked lists stored in flat Python lists."""

    def __init__(self, inst: ExactCoverInstance):
        m = inst.n_items
        # node 0 is the root, nodes 1..m are column headers
        self.L = list(range(-1, m)) + []
        self.R = list(range(1, m + 2))
        self.L[0] = m
        self.R[m] = 0
        self.U = list(range(m + 1))
        self.D = list(range(m + 1))
        self.C = list(range(m + 1))
        self.S = [0] * (m + 1)
        self.row = [-1] * (m + 1)
        for r, items in enumerate(inst.subsets):
            first = None
            for x in items:
                col = x + 1
                node = len(self.C)
                self.C.append(col)
                self.row.append(r)
                self.U.append(self.U[col])
                self.D.append(col)
                self.D[self.U[col]] = node
                self.U[col] = node
                self.S[col] += 1
                if first is None:
                    first = node
                    self.L.append(node)
                    self.R.append(node)
                else:
                    self.L.append(self.L[first])
                    self.R.append(first)
                    self.R[self.L[first]] = node
                    self.L[first] = node

    def cover(self, c):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        R[L[c]] = R[c]
        L[R[c]] = L[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                D[U[j]] = D[j]
                U[D[j]] = U[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def uncover(self, c):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                D[U[j]] = j
                U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[c]] = c
        L[R[c]] = c


def _search(links, partial, emit, limit):
    R, D, S = links.R, links.D, links.S
    if R[0] == 0:
        emit(tuple(sorted(partial)))
        return 1
    # MRV: the item with the fewest remaining subsets
    c = R[0]
    best = c
    while c != 0:
        if S[c] < S[best]:
            best = c
        c = R[c]
    if S[best] == 0:
        return 0
    c = best
    links.cover(c)
    found = 0
    r = D[c]
    while r != c:
        partial.append(links.row[r])
        j = links.R[r]
        while j != r:
            links.cover(links.C[j])
            j = links.R[j]
        found += _search(links, partial, emit, limit - found if limit else 0)
        j = links.L[r]
        while j != r:
            links.uncover(links.C[j])
            j = links.L[j]
        partial.pop()
        if limit and found >= limit:
            break
        r = D[r]
    links.uncover(c)
    return found


def solve_count(inst: ExactCoverInstance) -> int:
    return _search(_Links(inst), [], lambda sol: None, 0)


def solve_enumerate(inst: ExactCoverInstance, limit: int = 0) -> list:
    """Solutions as sorted tuples of subset indices."""
    out = []
    _search(_Links(inst), [], out.append, limit)
    return out


def transversal_instance(squares) -> ExactCoverInstance:
    """Items: rows, columns, then one block of symbols per square; one subset per cell."""
    if hasattr(squares, "squares"):
        squares = squares.squares
    elif hasattr(squares, "cells"):
        squares = [squares]
    squares = list(squares)
    n = squares[0].order
    subsets = []
    labels = []
    for r in range(n):
        for c in range(n):
            items = [r, n + c]
            for i, L in enumerate(squares):
                items.append(2 * n + i * n + L.cells[r * n + c])
            subsets.append(tuple(items))
            labels.append((r, c))
    return ExactCoverInstance((2 + len(squares)) * n, tuple(subsets), tuple(labels))


def partition_instance(transversals, n) -> ExactCoverInstance:
    """Items: the ``n*n`` cells; subsets: transversals given as collections of ``(r, c)`` cells."""
    subsets = tuple(tuple(sorted(r * n + c for r, c in t)) for t in transversals)
    return ExactCoverInstance(n * n, subsets, tuple(range(len(subsets))))


def transversals(squares) -> list:
    """Every common transversal as a frozenset of ``(r, c)`` cells."""
    inst = transversal_instance(squares)
    return [frozenset(inst.labels[i] for i in sol) for sol in solve_enumerate(inst)]


def count_mates(L) -> int:
    n = L.order
    ts = transversals(L)
    if not ts:
        return 0
    return solve_count(partition_instance(ts, n))
