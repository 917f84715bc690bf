"""Compiled inner loops for plex and partition search.

Item masks (columns plus one block of symbols per square) must fit in 64
bits here; wider profiles go through the pure-Python enumerator in
:mod:`molscope.plex`.  Cell sets always use two 64-bit words, which covers
``n*n <= 128``.
"""

import numpy as np
from numba import njit

_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_DEBRUIJN_TABLE = np.array([
    0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
    62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
    63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
    46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6,
], dtype=np.int64)


@njit(cache=True)
def _ctz(x):
    # x != 0; isolate lowest bit then de Bruijn lookup
    low = x & (~x + np.uint64(1))
    return _DEBRUIJN_TABLE[(low * _DEBRUIJN) >> np.uint64(58)]


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def enumerate_plexes(masks, ncombos, p, cap):
    """All choices of one combination per row whose item counts never exceed ``p``.

    ``masks[r, j]`` is the item mask of the j-th ``p``-subset of row ``r``.
    Returns ``(choices, status)``; status is 1 when ``cap`` was hit.
    """
    n = masks.shape[0]
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    occ = np.zeros((n + 1, p + 1), dtype=np.uint64)
    for r in range(n + 1):
        occ[r, 0] = full
    idx = np.full(n, -1, dtype=np.int64)
    size = 1024
    out = np.empty((size, n), dtype=np.int16)
    count = 0
    r = 0
    while r >= 0:
        idx[r] += 1
        if idx[r] >= ncombos[r]:
            idx[r] = -1
            r -= 1
            continue
        x = masks[r, idx[r]]
        if x & occ[r, p]:
            continue
        for i in range(1, p + 1):
            occ[r + 1, i] = occ[r, i] | (occ[r, i - 1] & x)
        if r == n - 1:
            if count == cap:
                return out[:count], 1
            if count == size:
                size *= 2
                grown = np.empty((size, n), dtype=np.int16)
                grown[:count] = out[:count]
                out = grown
            for j in range(n):
                out[count, j] = idx[j]
            count += 1
        else:
            r += 1
    return out[:count], 0


@njit(cache=True)
def skip_table(choices):
    """``T[i, r]``: first index after ``i`` whose row-``r`` choice differs from plex ``i``."""
    m, n = choices.shape
    t = np.empty((m, n), dtype=np.int64)
    for r in range(n):
        if m:
            t[m - 1, r] = m
        for i in range(m - 2, -1, -1):
            if choices[i + 1, r] != choices[i, r]:
                t[i, r] = i + 1
            else:
                t[i, r] = t[i + 1, r]
    return t


@njit(cache=True)
def cell_words(choices, combo_cells):
    """Two-word cell bitsets from per-row combination choices.

    ``combo_cells[r, j]`` holds the two words for combination ``j`` of row ``r``.
    """
    m, n = choices.shape
    out = np.zeros((m, 2), dtype=np.uint64)
    for i in range(m):
        lo = np.uint64(0)
        hi = np.uint64(0)
        for r in range(n):
            lo |= combo_cells[r, choices[i, r], 0]
            hi |= combo_cells[r, choices[i, r], 1]
        out[i, 0] = lo
        out[i, 1] = hi
    return out


@njit(cache=True)
def _first_row(lo, hi, n):
    if lo:
        return _ctz(lo) // n
    return (64 + _ctz(hi)) // n


@njit(cache=True)
def partitions(cells, skip, bucket_start, bucket_end, n, p, record, limit):
    """Count (and optionally record) partitions of the cells into ``n/p`` plexes.

    Each level takes a plex whose leftmost row-0 cell is the leftmost row-0
    cell not yet covered; for ``p = 1`` level ``t`` uses cell ``(0, t)``.
    Conflicting plexes are skipped to ``skip[P, r]`` where ``r`` is the first
    row of overlap.  Returns ``(count, recorded)``; counting stops at
    ``limit`` when ``limit > 0``.
    """
    levels = n // p
    used_lo = np.zeros(levels + 1, dtype=np.uint64)
    used_hi = np.zeros(levels + 1, dtype=np.uint64)
    pos = np.zeros(levels, dtype=np.int64)
    end = np.zeros(levels, dtype=np.int64)
    size = 16
    out = np.empty((size if record else 0, levels), dtype=np.int64)
    count = 0
    row0 = np.uint64((1 << n) - 1)

    level = 0
    free = ~used_lo[0] & row0
    c = _ctz(free)
    pos[0] = bucket_start[c]
    end[0] = bucket_end[c]
    while level >= 0:
        if pos[level] >= end[level]:
            level -= 1
            if level >= 0:
                pos[level] += 1
            continue
        i = pos[level]
        clo = cells[i, 0] & used_lo[level]
        chi = cells[i, 1] & used_hi[level]
        if clo or chi:
            pos[level] = skip[i, _first_row(clo, chi, n)]
            continue
        if level == levels - 1:
            if record:
                if count == size:
                    size *= 2
                    grown = np.empty((size, levels), dtype=np.int64)
                    grown[:count] = out[:count]
                    out = grown
                for j in range(levels - 1):
                    out[count, j] = pos[j]
                out[count, levels - 1] = i
            count += 1
            if limit > 0 and count >= limit:
                break
            pos[level] += 1
            continue
        used_lo[level + 1] = used_lo[level] | cells[i, 0]
        used_hi[level + 1] = used_hi[level] | cells[i, 1]
        level += 1
        free = ~used_lo[level] & row0
        c = _ctz(free)
        pos[level] = bucket_start[c]
        end[level] = bucket_end[c]
    if record:
        return count, out[:count]
    return count, out


@njit(cache=True)
def max_disjoint(cells, skip, row0_col, bucket_start, n):
    """Largest family of pairwise disjoint transversals.

    Successive members use strictly increasing cells of row 0.
    """
    m = cells.shape[0]
    if m == 0:
        return 0
    used_lo = np.zeros(n + 1, dtype=np.uint64)
    used_hi = np.zeros(n + 1, dtype=np.uint64)
    pos = np.zeros(n + 1, dtype=np.int64)
    best = 0
    level = 0
    pos[0] = 0
    while level >= 0:
        i = pos[level]
        if i >= m or level + (n - row0_col[i]) <= best:
            level -= 1
            if level >= 0:
                pos[level] += 1
            continue
        clo = cells[i, 0] & used_lo[level]
        chi = cells[i, 1] & used_hi[level]
        if clo or chi:
            pos[level] = skip[i, _first_row(clo, chi, n)]
            continue
        if level + 1 > best:
            best = level + 1
            if best == n:
                return best
        used_lo[level + 1] = used_lo[level] | cells[i, 0]
        used_hi[level + 1] = used_hi[level] | cells[i, 1]
        c = row0_col[i] + 1
        if c >= n:
            pos[level] += 1
            continue
        level += 1
        pos[level] = bucket_start[c]
    return best


@njit(cache=True)
def _meets(cells, a, b):
    return (cells[a, 0] & cells[b, 0]) or (cells[a, 1] & cells[b, 1])


# not cached: numba cannot reload self-recursive functions from its cache
@njit
def _alpha_node(cells, cand, ncand, depth, forbidden, best, root_orbit, nroot):
    """Branch-and-bound step of the smallest-maximal-family search.

    ``cand[:ncand]`` are the transversals disjoint from the current family.
    Returns the best size found so far (``best`` if nothing smaller).
    """
    if ncand == 0:
        return depth if depth < best else best
    if depth + 1 >= best:
        return best
    picks_left = best - 1 - depth

    if depth == 0 and nroot > 0:
        # one representative per orbit of the symmetry group; later orbits
        # exclude the earlier ones as members
        for o in range(nroot):
            t = -1
            for j in range(ncand):
                if root_orbit[cand[j]] == o:
                    t = cand[j]
                    break
            if t < 0:
                continue
            sub = np.empty(ncand, dtype=np.int64)
            ns = 0
            for j in range(ncand):
                c = cand[j]
                if not _meets(cells, t, c):
                    sub[ns] = c
                    ns += 1
            best = _alpha_node(cells, sub, ns, 1, forbidden, best, root_orbit, 0)
            for j in range(ncand):
                if root_orbit[cand[j]] == o:
                    forbidden[cand[j]] = True
        for j in range(ncand):
            forbidden[cand[j]] = False
        return best

    kill = np.zeros(ncand, dtype=np.int64)
    for a in range(ncand):
        if forbidden[cand[a]]:
            continue
        s = 0
        for b in range(ncand):
            if _meets(cells, cand[a], cand[b]):
                s += 1
        kill[a] = s
    if picks_left == 1:
        hit = False
        for a in range(ncand):
            if kill[a] == ncand:
                hit = True
                break
        if hit:
            return depth + 1
        return best
    top = np.sort(kill)[::-1]
    s = 0
    for j in range(min(picks_left, ncand)):
        s += top[j]
    if s < ncand:
        return best

    # candidate with fewest pickable transversals meeting it
    choice = -1
    fewest = ncand + 1
    for b in range(ncand):
        f = 0
        for a in range(ncand):
            if kill[a] > 0 and _meets(cells, cand[a], cand[b]):
                f += 1
        if f < fewest:
            fewest = f
            choice = b
            if f == 0:
                return best
    branch = np.empty(fewest, dtype=np.int64)
    bk = np.empty(fewest, dtype=np.int64)
    nb = 0
    for a in range(ncand):
        if kill[a] > 0 and _meets(cells, cand[a], cand[choice]):
            branch[nb] = cand[a]
            bk[nb] = -kill[a]
            nb += 1
    order = np.argsort(bk, kind="mergesort")
    marked = np.empty(nb, dtype=np.int64)
    nm = 0
    for q in range(nb):
        t = branch[order[q]]
        if depth + 1 >= best:
            break
        sub = np.empty(ncand, dtype=np.int64)
        ns = 0
        for j in range(ncand):
            c = cand[j]
            if not _meets(cells, t, c):
                sub[ns] = c
                ns += 1
        best = _alpha_node(cells, sub, ns, depth + 1, forbidden, best, root_orbit, 0)
        forbidden[t] = True
        marked[nm] = t
        nm += 1
    for q in range(nm):
        forbidden[marked[q]] = False
    return best


@njit
def alpha(cells, n, root_orbit, nroot):
    m = cells.shape[0]
    cand = np.arange(m)
    forbidden = np.zeros(m, dtype=np.bool_)
    return _alpha_node(cells, cand, m, 0, forbidden, n + 1, root_orbit, nroot)


@njit(cache=True)
def reduced_squares(n, lo_cells):
    """Enumerate reduced latin squares of order ``n`` in lexicographic order.

    Each square is keyed by its inner ``(n-2) x (n-2)`` block (rows and
    columns ``1..n-2``), packed 3 bits per cell, ``lo_cells`` cells in the
    high word and the rest in the low word.  Returns an ``(N, 2)`` array.
    """
    g = np.zeros((n, n), dtype=np.int64)
    rowused = np.zeros(n, dtype=np.int64)
    colused = np.zeros(n, dtype=np.int64)
    for c in range(n):
        g[0, c] = c
        rowused[0] |= 1 << c
        colused[c] |= 1 << c
    for r in range(1, n):
        g[r, 0] = r
        rowused[r] |= 1 << r
        colused[0] |= 1 << r
    size = 1 << 16
    out = np.empty((size, 2), dtype=np.uint64)
    count = 0
    if n <= 2:
        out[0, 0] = 0
        out[0, 1] = 0
        return out[:1]
    ncell = (n - 1) * (n - 1)
    # cells in row-major order over rows 1..n-1, cols 1..n-1
    val = np.full(ncell, -1, dtype=np.int64)
    k = 0
    while k >= 0:
        r = 1 + k // (n - 1)
        c = 1 + k % (n - 1)
        if val[k] >= 0:
            s = val[k]
            rowused[r] &= ~(1 << s)
            colused[c] &= ~(1 << s)
        s = val[k] + 1
        while s < n and ((rowused[r] >> s) & 1 or (colused[c] >> s) & 1):
            s += 1
        if s >= n:
            val[k] = -1
            k -= 1
            continue
        val[k] = s
        g[r, c] = s
        rowused[r] |= 1 << s
        colused[c] |= 1 << s
        if k == ncell - 1:
            if count == size:
                size *= 2
                grown = np.empty((size, 2), dtype=np.uint64)
                grown[:count] = out[:count]
                out = grown
            hi = np.uint64(0)
            lo = np.uint64(0)
            j = 0
            for rr in range(1, n - 1):
                for cc in range(1, n - 1):
                    if j < lo_cells:
                        hi = (hi << np.uint64(3)) | np.uint64(g[rr, cc])
                    else:
                        lo = (lo << np.uint64(3)) | np.uint64(g[rr, cc])
                    j += 1
            out[count, 0] = hi
            out[count, 1] = lo
            count += 1
            # undo and continue searching at this cell
            continue
        k += 1
    return out[:count]


@njit(cache=True)
def _key_of(g, n, lo_cells):
    hi = np.uint64(0)
    lo = np.uint64(0)
    j = 0
    for rr in range(1, n - 1):
        for cc in range(1, n - 1):
            if j < lo_cells:
                hi = (hi << np.uint64(3)) | np.uint64(g[rr, cc])
            else:
                lo = (lo << np.uint64(3)) | np.uint64(g[rr, cc])
            j += 1
    return hi, lo


@njit(cache=True)
def _find(keys, hi, lo):
    a = 0
    b = keys.shape[0]
    while a < b:
        m = (a + b) // 2
        if keys[m, 0] < hi or (keys[m, 0] == hi and keys[m, 1] < lo):
            a = m + 1
        else:
            b = m
    if a < keys.shape[0] and keys[a, 0] == hi and keys[a, 1] == lo:
        return a
    return -1


@njit(cache=True)
def mark_species(keys, seen, square, perms, lo_cells):
    """Mark every reduced square in the species of ``square``.

    Visits the six conjugates, every column permutation and every choice of
    first row, reduces, and flags the result in ``seen``.  Returns the number
    of newly marked squares, or ``-1`` if a reduced square is missing from
    ``keys``.
    """
    n = square.shape[0]
    conj = np.empty((n, n), dtype=np.int64)
    work = np.empty((n, n), dtype=np.int64)
    red = np.empty((n, n), dtype=np.int64)
    sym = np.empty(n, dtype=np.int64)
    roles = np.array([[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]])
    t = np.empty(3, dtype=np.int64)
    fresh = 0
    for q in range(6):
        for r in range(n):
            for c in range(n):
                t[0] = r
                t[1] = c
                t[2] = square[r, c]
                conj[t[roles[q, 0]], t[roles[q, 1]]] = t[roles[q, 2]]
        for pi in range(perms.shape[0]):
            for r in range(n):
                for c in range(n):
                    work[r, c] = conj[r, perms[pi, c]]
            for first in range(n):
                for c in range(n):
                    sym[work[first, c]] = c
                for r in range(n):
                    dest = sym[work[r, 0]]
                    for c in range(n):
                        red[dest, c] = sym[work[r, c]]
                hi, lo = _key_of(red, n, lo_cells)
                i = _find(keys, hi, lo)
                if i < 0:
                    return -1
                if not seen[i]:
                    seen[i] = True
                    fresh += 1
    return fresh
