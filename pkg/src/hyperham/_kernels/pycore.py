"""Pure-Python search kernels.

Reference implementations of the three hot search loops; the compiled twin in
`fastcore.pyx` mirrors the traversal order exactly, so both backends return
identical results AND identical expansion counts.  Statuses: 0 found, 1 none
(search space exhausted), 2 timeout (budget hit).

All kernels take the shared window index: for every (k-1)-subset S (ranked
colexicographically), `values[offsets[r]:offsets[r+1]]` lists, ascending, the
vertices v with S ∪ {v} an edge.
"""

from __future__ import annotations

BACKEND_NAME = "pure-python"

FOUND = 0
NONE = 1
TIMEOUT = 2

# Lossy failure-memo table shared semantics with the compiled backend:
# open addressing, golden-ratio hash, bounded probe, overwrite-on-full.
_GOLD = 0x9E3779B97F4A7C15
_M64 = (1 << 64) - 1
_LOG_SLOTS = 20
_SLOTS = 1 << _LOG_SLOTS
_PROBES = 8

_MAX_CYCLE_N = 32  # failure-memo keys pack a vertex bitmask into 64 bits


def _rank_sorted(window, comb):
    # colex rank of an ascending (k-1)-subset
    r = 0
    for j, v in enumerate(window):
        r += comb[v][j + 1]
    return r


def _has_edge(sorted_edge, offsets, values, comb):
    # membership of a sorted k-set, via its smallest (k-1)-subset's bucket
    r = _rank_sorted(sorted_edge[:-1], comb)
    lo, hi = offsets[r], offsets[r + 1]
    want = sorted_edge[-1]
    while lo < hi:
        mid = (lo + hi) // 2
        if values[mid] < want:
            lo = mid + 1
        else:
            hi = mid
    return lo < offsets[r + 1] and values[lo] == want


def find_ham_cycle(n, k, offsets, values, comb, budget):
    """Exhaustive tight-Hamiltonian-cycle search, anchored at vertex 0.

    Symmetry: only traversals with second vertex < last vertex complete, so
    each undirected cycle is produced exactly once.  Returns
    (status, cycle list | None, expansions).
    """
    if n > _MAX_CYCLE_N:
        raise ValueError(f"cycle kernel supports n <= {_MAX_CYCLE_N}, got {n}")
    if k > 4:
        raise ValueError("cycle kernel supports k <= 4")
    if n < k + 1:
        return (NONE, None, 0)

    off = offsets.tolist()
    val = values.tolist()
    cmb = comb.tolist()

    path = [0] * n
    used = [False] * n
    used[0] = True
    suffix_stride = n ** (k - 1)
    table = [0] * _SLOTS
    state = [0, 0]  # expansions, epoch

    def probe(key):
        slot = ((key * _GOLD) & _M64) >> (64 - _LOG_SLOTS)
        entry = ((state[1] << 48) | key) + 1
        for t in range(_PROBES):
            s = (slot + t) & (_SLOTS - 1)
            cur = table[s]
            if cur == 0:
                return (False, s)
            if cur == entry:
                return (True, s)
        return (False, slot)  # full neighbourhood: overwrite first slot

    def insert(key, slot):
        table[slot] = ((state[1] << 48) | key) + 1

    def dfs(depth, mask):
        state[0] += 1
        if state[0] > budget:
            return TIMEOUT
        if depth == n:
            if path[1] >= path[n - 1]:
                return NONE
            for s in range(n - k + 1, n):
                window = sorted(path[(s + i) % n] for i in range(k))
                if not _has_edge(window, off, val, cmb):
                    return NONE
            return FOUND
        key = mask
        for i in range(depth - k + 1, depth):
            key = key * n + path[i]
        # equivalent packing: mask * stride + ordered-suffix rank
        hit, slot = probe(key)
        if hit:
            return NONE
        window = sorted(path[depth - k + 1 : depth])
        r = _rank_sorted(window, cmb)
        for idx in range(off[r], off[r + 1]):
            v = val[idx]
            if used[v]:
                continue
            path[depth] = v
            used[v] = True
            res = dfs(depth + 1, mask | (1 << v))
            used[v] = False
            if res != NONE:
                return res
        insert(key, slot)
        return NONE

    if k == 2:
        prefixes = [()]
    elif k == 3:
        prefixes = [(p,) for p in range(1, n)]
    else:
        prefixes = [
            (p1, p2)
            for p1 in range(1, n)
            for p2 in range(1, n)
            if p2 != p1
        ]
    for prefix in prefixes:
        state[1] += 1
        mask = 1
        for i, p in enumerate(prefix):
            path[i + 1] = p
            used[p] = True
            mask |= 1 << p
        res = dfs(k - 1, mask)
        for p in prefix:
            used[p] = False
        if res == FOUND:
            return (FOUND, path[:], state[0])
        if res == TIMEOUT:
            return (TIMEOUT, None, state[0])
    return (NONE, None, state[0])


def find_path_exact(n, k, offsets, values, comb, start, target, inner, allowed, budget):
    """Tight path from ordered (k-1)-tuple `start` to `target` with exactly
    `inner` new vertices, all drawn from `allowed`.  The k-1 seam windows into
    `target` are checked; returns (status, inner tuple | None, expansions)."""
    off = offsets.tolist()
    val = values.tolist()
    cmb = comb.tolist()
    start = list(start)
    target = list(target)
    allowed = list(allowed)

    used = [False] * n
    for v in start:
        used[v] = True
    for v in target:
        used[v] = True
    seq = start + [0] * inner
    state = [0]

    def bridge_ok(depth):
        tail = seq[depth - k + 2 : depth + 1] + target
        for i in range(k - 1):
            window = sorted(tail[i : i + k])
            if not _has_edge(window, off, val, cmb):
                return False
        return True

    def dfs(placed):
        state[0] += 1
        if state[0] > budget:
            return TIMEOUT
        depth = k - 2 + placed
        if placed == inner:
            return FOUND if bridge_ok(depth) else NONE
        window = sorted(seq[depth - k + 2 : depth + 1])
        r = _rank_sorted(window, cmb)
        for idx in range(off[r], off[r + 1]):
            v = val[idx]
            if used[v] or not allowed[v]:
                continue
            seq[depth + 1] = v
            used[v] = True
            res = dfs(placed + 1)
            used[v] = False
            if res != NONE:
                return res
        return NONE

    res = dfs(0)
    if res == FOUND:
        return (FOUND, seq[k - 1 :], state[0])
    return (res, None, state[0])


def find_cover_path(n, k, offsets, values, comb, starts, m_vertices, allowed, end_ok, budget):
    """First M-vertex tight path inside `allowed` whose ordered end (k-1)-tuples
    both satisfy `end_ok` (row-major ranks).  `starts` lists candidate ordered
    start tuples in canonical order.  Returns (status, path | None, expansions)."""
    off = offsets.tolist()
    val = values.tolist()
    cmb = comb.tolist()
    start_rows = starts.tolist()
    allowed = list(allowed)
    end_ok = list(end_ok)

    used = [False] * n
    seq = [0] * m_vertices
    state = [0]

    def ordered_rank(window):
        r = 0
        for v in window:
            r = r * n + v
        return r

    def dfs(depth):
        state[0] += 1
        if state[0] > budget:
            return TIMEOUT
        if depth == m_vertices:
            return FOUND if end_ok[ordered_rank(seq[depth - k + 1 : depth])] else NONE
        window = sorted(seq[depth - k + 1 : depth])
        r = _rank_sorted(window, cmb)
        for idx in range(off[r], off[r + 1]):
            v = val[idx]
            if used[v] or not allowed[v]:
                continue
            seq[depth] = v
            used[v] = True
            res = dfs(depth + 1)
            used[v] = False
            if res != NONE:
                return res
        return NONE

    for row in start_rows:
        if any(not allowed[v] for v in row):
            continue
        if not end_ok[ordered_rank(row)]:
            continue
        for i, v in enumerate(row):
            seq[i] = v
            used[v] = True
        res = dfs(k - 1)
        for v in row:
            used[v] = False
        if res == FOUND:
            return (FOUND, seq[:], state[0])
        if res == TIMEOUT:
            return (TIMEOUT, None, state[0])
    return (NONE, None, state[0])
