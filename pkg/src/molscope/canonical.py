"""Canonical labelling of orthogonal arrays through a vertex-coloured graph.

An array of width ``w`` over ``n`` symbols becomes a graph with one vertex per
column, one per (column, symbol) and one per array row.  Column vertices are
joined to their symbol vertices and each row vertex to the ``w`` symbol
vertices it uses.  Colour-preserving isomorphisms of these graphs are exactly
the paratopisms between arrays, restricted according to how the column
vertices are coloured.

The labeller is a plain individualisation-refinement search: equitable
refinement with a trace, a target cell with many non-trivial joins, pruning
by trace against the first and best leaves, and automorphism pruning.
"""

from __future__ import annotations

import enum
from collections import Counter, deque
from dataclasses import dataclass
from math import factorial

from .mols import OrthogonalArray, as_mols, to_oa


class EquivalenceMode(enum.Enum):
    SPECIES_MOLS = "species"
    ISOTOPISM_LIST = "isotopism-list"
    ISOTOPISM_SET = "isotopism-set"
    TRISOTOPISM_LIST = "trisotopism-list"
    TRISOTOPISM_SET = "trisotopism-set"
    SPECIES_LS = "species-ls"


def column_colours(w, mode):
    """Colour of each column vertex under ``mode``."""
    if mode in (EquivalenceMode.SPECIES_MOLS, EquivalenceMode.SPECIES_LS):
        if mode is EquivalenceMode.SPECIES_LS and w != 3:
            raise ValueError("SPECIES_LS needs a single square (width 3)")
        return [0] * w
    if mode is EquivalenceMode.ISOTOPISM_LIST:
        return list(range(w))
    if mode is EquivalenceMode.ISOTOPISM_SET:
        return [0, 1] + [2] * (w - 2)
    if mode is EquivalenceMode.TRISOTOPISM_LIST:
        return [0, 0] + list(range(1, w - 1))
    if mode is EquivalenceMode.TRISOTOPISM_SET:
        return [0, 0] + [1] * (w - 2)
    raise ValueError(mode)


@dataclass(frozen=True)
class ColoredGraph:
    n_vertices: int
    adj: tuple  # sorted neighbour tuples
    colors: tuple

    def __post_init__(self):
        if len(self.adj) != self.n_vertices or len(self.colors) != self.n_vertices:
            raise ValueError("adjacency and colouring must cover every vertex")

    def check(self):
        for v, nb in enumerate(self.adj):
            for u in nb:
                if u == v:
                    raise ValueError(f"loop at {v}")
                if v not in self.adj[u]:
                    raise ValueError(f"edge {v}-{u} not symmetric")
        return True

    @property
    def n_edges(self):
        return sum(len(nb) for nb in self.adj) // 2

    def relabel(self, perm):
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        V = self.n_vertices
        adj = [None] * V
        col = [0] * V
        for v in range(V):
            adj[perm[v]] = tuple(sorted(perm[u] for u in self.adj[v]))
            col[perm[v]] = self.colors[v]
        return ColoredGraph(V, tuple(adj), tuple(col))


@dataclass(frozen=True)
class CanonicalCertificate:
    data: bytes

    def hex(self):
        return self.data.hex()

    @classmethod
    def fromhex(cls, text):
        return cls(bytes.fromhex(text))

    def __str__(self):
        return self.hex()


def encode_graph(O, mode=EquivalenceMode.SPECIES_MOLS) -> ColoredGraph:
    if not isinstance(O, OrthogonalArray):
        O = to_oa(O)
    n, w = O.order, O.width
    c1 = column_colours(w, mode)
    sym_colour = max(c1) + 1
    row_colour = sym_colour + 1
    V = w + w * n + n * n
    adj = [[] for _ in range(V)]
    for j in range(w):
        for s in range(n):
            v = w + j * n + s
            adj[j].append(v)
            adj[v].append(j)
    for x, row in enumerate(O.rows):
        v = w + w * n + x
        for j, s in enumerate(row):
            u = w + j * n + s
            adj[v].append(u)
            adj[u].append(v)
    colors = c1 + [sym_colour] * (w * n) + [row_colour] * (n * n)
    return ColoredGraph(V, tuple(tuple(sorted(a)) for a in adj), tuple(colors))


def _cycle_type(perm):
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            out.append(length)
    return tuple(sorted(out))


def symbol_invariant(O: OrthogonalArray):
    """Per (column, symbol) multiset of cycle types of line-to-line permutations.

    For column ``a`` and symbols ``u != v`` of it, and two further columns
    ``b, c``, follow the row with ``a=u`` to the row with ``a=v`` sharing its
    ``b`` symbol and record how the ``c`` symbol moves.  Invariant under
    paratopisms, so safe to seed refinement with.
    """
    n, w = O.order, O.width
    rows = O.rows
    out = {}
    for a in range(w):
        for b in range(w):
            if b == a:
                continue
            for c in range(w):
                if c in (a, b):
                    continue
                # line[u][s] = c-symbol of the row with a=u, b=s
                line = [[0] * n for _ in range(n)]
                for row in rows:
                    line[row[a]][row[b]] = row[c]
                inv = []
                for u in range(n):
                    iu = [0] * n
                    for s, x in enumerate(line[u]):
                        iu[x] = s
                    inv.append(iu)
                for u in range(n):
                    tally = out.setdefault((a, u), Counter())
                    for v in range(n):
                        if v != u:
                            lv = line[v]
                            tally[_cycle_type([lv[s] for s in inv[u]])] += 1
    return {key: tuple(sorted(t.items())) for key, t in out.items()}


class _Partition:
    """Ordered partition: ``lab`` lists vertices, cells are ``lab[s:end[s]]``."""

    __slots__ = ("lab", "cell", "end")

    def __init__(self, lab, cell, end):
        self.lab = lab
        self.cell = cell
        self.end = end

    def copy(self):
        return _Partition(self.lab[:], self.cell[:], dict(self.end))

    def discrete(self):
        return len(self.end) == len(self.lab)


def _refine(g_adj, part, queue_starts):
    """Make ``part`` equitable, splitting cells by neighbour counts.  Returns a trace."""
    lab, cell, end = part.lab, part.cell, part.end
    queue = deque(queue_starts)
    inq = set(queue_starts)
    trace = []
    V = len(lab)
    while queue and len(end) < V:
        w = queue.popleft()
        inq.discard(w)
        cnt = {}
        for u in lab[w:end[w]]:
            for x in g_adj[u]:
                cnt[x] = cnt.get(x, 0) + 1
        touched = sorted({cell[x] for x in cnt})
        trace.append(w)
        trace.append(len(touched))
        for s in touched:
            e = end[s]
            if e - s == 1:
                continue
            members = lab[s:e]
            vals = [cnt.get(v, 0) for v in members]
            first = vals[0]
            if all(x == first for x in vals):
                trace.append(first)
                continue
            order = sorted(range(e - s), key=vals.__getitem__)
            members = [members[i] for i in order]
            vals = [vals[i] for i in order]
            lab[s:e] = members
            starts = [s]
            for i in range(1, e - s):
                if vals[i] != vals[i - 1]:
                    starts.append(s + i)
            bounds = starts + [e]
            for a, b in zip(bounds, bounds[1:]):
                end[a] = b
                for v in lab[a:b]:
                    cell[v] = a
            trace.append(-1)
            for a, b in zip(bounds, bounds[1:]):
                trace.append(vals[a - s])
                trace.append(b - a)
            if s in inq:
                for a in starts[1:]:
                    queue.append(a)
                    inq.add(a)
            else:
                big = max(range(len(starts)), key=lambda i: bounds[i + 1] - bounds[i])
                for i, a in enumerate(starts):
                    if i != big:
                        queue.append(a)
                        inq.add(a)
    return tuple(trace)


def _individualize(part, v):
    lab, cell, end = part.lab, part.cell, part.end
    s = cell[v]
    e = end[s]
    i = lab.index(v, s, e)
    lab[s], lab[i] = lab[i], lab[s]
    end[s] = s + 1
    end[s + 1] = e
    for u in lab[s + 1:e]:
        cell[u] = s + 1
    return s


def _target_cell(g_adj, part):
    """First non-singleton cell with the most non-trivial joins to other non-singleton cells."""
    lab, cell, end = part.lab, part.cell, part.end
    big = [s for s, e in end.items() if e - s > 1]
    big.sort()
    if len(big) == 1:
        return big[0]
    sizes = {s: end[s] - s for s in big}
    best, best_score = big[0], -1
    for s in big:
        hits = Counter(cell[x] for x in g_adj[lab[s]])
        score = sum(1 for t, h in hits.items() if t != s and t in sizes and h < sizes[t])
        if score > best_score:
            best, best_score = s, score
    return best


def _orbits(V, gens, members):
    parent = {v: v for v in members}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for v in members:
            a, b = find(v), find(g[v])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return {v: find(v) for v in members}


class _Search:
    def __init__(self, graph: ColoredGraph, seed=None):
        self.g = graph
        self.adj = graph.adj
        self.V = graph.n_vertices
        self.seed = seed
        self.gens = []
        self.first = None  # (path, traces, code, lab)
        self.best = None
        self.nodes = 0

    def _root(self):
        V = self.V
        key = self.g.colors if self.seed is None else [(c, s) for c, s in zip(self.g.colors, self.seed)]
        lab = sorted(range(V), key=lambda v: (key[v], v))
        cell = [0] * V
        end = {}
        s = 0
        for i in range(1, V + 1):
            if i == V or key[lab[i]] != key[lab[i - 1]]:
                end[s] = i
                for v in lab[s:i]:
                    cell[v] = s
                s = i
        part = _Partition(lab, cell, end)
        trace = _refine(self.adj, part, sorted(end))
        return part, trace

    def _code(self, lab):
        pos = [0] * self.V
        for i, v in enumerate(lab):
            pos[v] = i
        return tuple(tuple(sorted(pos[u] for u in self.adj[v])) for v in lab)

    def run(self):
        part, trace = self._root()
        self._dfs(part, [], [trace])

    def _leaf(self, part, path, traces):
        lab = part.lab
        code = self._code(lab)
        if self.first is None:
            self.first = (path, traces, code, lab)
            self.best = self.first
            return len(path)
        for ref in (self.first, self.best):
            if code == ref[2]:
                gamma = [0] * self.V
                for a, b in zip(ref[3], lab):
                    gamma[a] = b
                gamma = tuple(gamma)
                if any(x != i for i, x in enumerate(gamma)):
                    self.gens.append(gamma)
                if ref is self.first and traces == ref[1]:
                    # the whole subtree below the divergence point is an image of the first one
                    fp = ref[0]
                    d = 0
                    while path[d] == fp[d]:
                        d += 1
                    return d
                return len(path)
        if (traces, code) < (self.best[1], self.best[2]):
            self.best = (path, traces, code, lab)
        return len(path)

    def _dfs(self, part, path, traces):
        self.nodes += 1
        if part.discrete():
            return self._leaf(part, path, traces)
        level = len(path)
        s = _target_cell(self.adj, part)
        cands = sorted(part.lab[s:part.end[s]])
        used_gens = -1
        rep = None
        for v in cands:
            if len(self.gens) != used_gens:
                used_gens = len(self.gens)
                fixing = [g for g in self.gens if all(g[x] == x for x in path)]
                rep = _orbits(self.V, fixing, cands) if fixing else None
            if rep is not None and rep[v] != v:
                continue
            child = part.copy()
            cs = _individualize(child, v)
            t = _refine(self.adj, child, [cs])
            ctraces = traces + [t]
            cpath = path + [v]
            if self.first is not None:
                eq_first = ctraces == self.first[1][:level + 2]
                if not eq_first and ctraces > self.best[1][:level + 2]:
                    continue
            back = self._dfs(child, cpath, ctraces)
            if back < level:
                return back
        return len(path)

    def group_order(self):
        order = 1
        fp = self.first[0]
        root, _ = self._root()
        part = root
        for lvl, v in enumerate(fp):
            s = part.cell[v]
            members = part.lab[s:part.end[s]]
            fixing = [g for g in self.gens if all(g[x] == x for x in fp[:lvl])]
            rep = _orbits(self.V, fixing, members)
            order *= sum(1 for u in members if rep[u] == rep[v])
            cs = _individualize(part, v)
            _refine(self.adj, part, [cs])
        return order


@dataclass
class LabellingResult:
    certificate: CanonicalCertificate
    labelling: tuple  # labelling[v] = canonical position of v
    generators: list
    group_order: int
    nodes: int


def _serialize(graph, code):
    hist = sorted(Counter(graph.colors).items())
    out = bytearray()
    out += len(hist).to_bytes(2, "big")
    for c, k in hist:
        out += int(c).to_bytes(2, "big") + k.to_bytes(2, "big")
    V = graph.n_vertices
    nbytes = (V + 7) // 8
    for row in code:
        bits = 0
        for u in row:
            bits |= 1 << u
        out += bits.to_bytes(nbytes, "little")
    return bytes(out)


def label(graph: ColoredGraph, seed=None) -> LabellingResult:
    """Canonical labelling, automorphism generators and group order of ``graph``.

    ``seed`` is an optional per-vertex invariant used to split the initial
    colour classes; it must be isomorphism-invariant.
    """
    search = _Search(graph, seed)
    search.run()
    _, _, code, lab = search.best
    pos = [0] * graph.n_vertices
    for i, v in enumerate(lab):
        pos[v] = i
    cert = CanonicalCertificate(_serialize(graph, code))
    return LabellingResult(cert, tuple(pos), list(search.gens), search.group_order(), search.nodes)


def _seed_for(O: OrthogonalArray):
    n, w = O.order, O.width
    if w < 3:
        return None
    inv = symbol_invariant(O)
    values = sorted(set(inv.values()))
    rank = {x: i + 1 for i, x in enumerate(values)}
    seed = [0] * (w + w * n + n * n)
    for (a, u), x in inv.items():
        seed[w + a * n + u] = rank[x]
    return seed


def label_array(O, mode=EquivalenceMode.SPECIES_MOLS, use_invariant=True) -> LabellingResult:
    if not isinstance(O, OrthogonalArray):
        O = to_oa(O)
    g = encode_graph(O, mode)
    return label(g, _seed_for(O) if use_invariant else None)


def canonical_certificate(G, mode=EquivalenceMode.SPECIES_MOLS) -> CanonicalCertificate:
    """Certificate of a graph, or of an array / MOLS list encoded under ``mode``."""
    if isinstance(G, ColoredGraph):
        return label(G).certificate
    return label_array(G, mode).certificate


def automorphism_order(G) -> int:
    if isinstance(G, ColoredGraph):
        return label(G).group_order
    return label_array(G).group_order


def _single(M):
    return as_mols(M).k == 1


def par_order(M) -> int:
    mode = EquivalenceMode.SPECIES_LS if _single(M) else EquivalenceMode.SPECIES_MOLS
    return label_array(M, mode).group_order


def atp_order(M) -> int:
    return label_array(M, EquivalenceMode.ISOTOPISM_LIST).group_order


def species_key(M) -> str:
    mode = EquivalenceMode.SPECIES_LS if _single(M) else EquivalenceMode.SPECIES_MOLS
    return label_array(M, mode).certificate.hex()


def key(M, mode) -> str:
    return label_array(M, mode).certificate.hex()


# -- symmetry groups ---------------------------------------------------------

def cell_automorphisms(M) -> list:
    """Autoparatopism generators as permutations of the ``n*n`` cells (array rows)."""
    O = to_oa(M)
    n, w = O.order, O.width
    res = label_array(O, EquivalenceMode.SPECIES_MOLS)
    base = w + w * n
    return [tuple(g[base + x] - base for x in range(n * n)) for g in res.generators]


def _closure(gens, w):
    e = tuple(range(w))
    group = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = tuple(g[h[i]] for i in range(w))
                if x not in group:
                    group.add(x)
                    nxt.append(x)
        frontier = nxt
    return group


def column_group(M):
    """Permutations of the array columns induced by autoparatopisms, plus ``|par|``."""
    O = to_oa(M)
    w = O.width
    res = label_array(O, EquivalenceMode.SPECIES_MOLS)
    gens = {tuple(g[:w]) for g in res.generators}
    return _closure(gens, w), res.group_order


def _cycle_type_counts(group):
    return Counter(_cycle_type(g) for g in group)


def _centraliser(ctype):
    z = 1
    for length, m in Counter(ctype).items():
        z *= length ** m * factorial(m)
    return z


def double_coset_count(left, right) -> int:
    """Number of double cosets ``left \\ S_w / right`` for subgroups given as element sets."""
    a = _cycle_type_counts(left)
    b = _cycle_type_counts(right)
    total = sum(a[t] * b[t] * _centraliser(t) for t in a if t in b)
    den = len(left) * len(right)
    if total % den:
        raise ArithmeticError("double coset count is not integral")
    return total // den


def notion_group(w, notion, kind):
    """Column permutations allowed by ``notion`` for lists or sets of ``w - 2`` squares."""
    from itertools import permutations

    e = tuple(range(w))
    if notion == "paratopism":
        return set(permutations(range(w)))
    swap = {e}
    if notion == "trisotopism":
        swap.add((1, 0) + e[2:])
    elif notion != "isotopism":
        raise ValueError(f"unknown notion {notion!r}")
    tail = {e[2:]} if kind == "list" else set(permutations(range(2, w)))
    return {s[:2] + t for s in swap for t in tail}


def classes_in_species(column_perms, notion, kind) -> int:
    """How many ``notion`` classes of lists/sets one species splits into."""
    w = len(next(iter(column_perms)))
    return double_coset_count(notion_group(w, notion, kind), column_perms)
