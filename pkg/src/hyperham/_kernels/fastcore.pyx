# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; traversal order matches pycore exactly."""

import numpy as np

BACKEND_NAME = "cython"

FOUND = 0
NONE = 1
TIMEOUT = 2

cdef unsigned long long GOLD = 0x9E3779B97F4A7C15ULL
cdef int LOG_SLOTS = 20
cdef long long SLOTS = 1 << 20
cdef int PROBES = 8
cdef int MAX_CYCLE_N = 32


cdef inline long long rank_sorted(int* window, int size, long long[:, ::1] comb):
    cdef long long r = 0
    cdef int j
    for j in range(size):
        r += comb[window[j], j + 1]
    return r


cdef inline void sort_small(int* a, int size):
    # insertion sort; windows have at most 8 entries
    cdef int i, j, key
    for i in range(1, size):
        key = a[i]
        j = i - 1
        while j >= 0 and a[j] > key:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = key


cdef inline bint has_edge(int* sorted_edge, int k,
                          long long[::1] offsets, int[::1] values,
                          long long[:, ::1] comb):
    cdef long long r = rank_sorted(sorted_edge, k - 1, comb)
    cdef long long lo = offsets[r]
    cdef long long hi = offsets[r + 1]
    cdef long long mid
    cdef int want = sorted_edge[k - 1]
    while lo < hi:
        mid = (lo + hi) // 2
        if values[mid] < want:
            lo = mid + 1
        else:
            hi = mid
    return lo < offsets[r + 1] and values[lo] == want


# ------------------------------------------------------------------ ham cycle

cdef struct HamState:
    long long expansions
    long long budget
    long long epoch
    int n
    int k


cdef int ham_probe(unsigned long long[::1] table, HamState* st,
                   unsigned long long key, long long* slot_out):
    cdef unsigned long long entry = ((<unsigned long long> st.epoch) << 48 | key) + 1
    cdef long long slot = <long long> ((key * GOLD) >> (64 - LOG_SLOTS))
    cdef long long s
    cdef int t
    for t in range(PROBES):
        s = (slot + t) & (SLOTS - 1)
        if table[s] == 0:
            slot_out[0] = s
            return 0
        if table[s] == entry:
            slot_out[0] = s
            return 1
    slot_out[0] = slot
    return 0


cdef int ham_dfs(int depth, unsigned long long mask,
                 int* path, unsigned char* used,
                 long long[::1] offsets, int[::1] values, long long[:, ::1] comb,
                 unsigned long long[::1] table, HamState* st):
    st.expansions += 1
    if st.expansions > st.budget:
        return TIMEOUT
    cdef int n = st.n
    cdef int k = st.k
    cdef int i, s, v, res
    cdef int window[8]
    cdef long long r, idx, slot
    cdef unsigned long long key
    if depth == n:
        if path[1] >= path[n - 1]:
            return NONE
        for s in range(n - k + 1, n):
            for i in range(k):
                window[i] = path[(s + i) % n]
            sort_small(window, k)
            if not has_edge(window, k, offsets, values, comb):
                return NONE
        return FOUND
    key = mask
    for i in range(depth - k + 1, depth):
        key = key * (<unsigned long long> n) + (<unsigned long long> path[i])
    cdef int hit = ham_probe(table, st, key, &slot)
    if hit:
        return NONE
    for i in range(k - 1):
        window[i] = path[depth - k + 1 + i]
    sort_small(window, k - 1)
    r = rank_sorted(window, k - 1, comb)
    for idx in range(offsets[r], offsets[r + 1]):
        v = values[idx]
        if used[v]:
            continue
        path[depth] = v
        used[v] = 1
        res = ham_dfs(depth + 1, mask | (1ULL << v),
                      path, used, offsets, values, comb, table, st)
        used[v] = 0
        if res != NONE:
            return res
    table[slot] = ((<unsigned long long> st.epoch) << 48 | key) + 1
    return NONE


def find_ham_cycle(int n, int k, long long[::1] offsets, int[::1] values,
                   long long[:, ::1] comb, long long budget):
    if n > MAX_CYCLE_N:
        raise ValueError(f"cycle kernel supports n <= {MAX_CYCLE_N}, got {n}")
    if k > 4:
        raise ValueError("cycle kernel supports k <= 4")
    if n < k + 1:
        return (NONE, None, 0)
    path_arr = np.zeros(n, dtype=np.int32)
    used_arr = np.zeros(n, dtype=np.uint8)
    table_arr = np.zeros(SLOTS, dtype=np.uint64)
    cdef int[::1] path_mv = path_arr
    cdef unsigned char[::1] used_mv = used_arr
    cdef unsigned long long[::1] table = table_arr
    cdef int* path = &path_mv[0]
    cdef unsigned char* used = &used_mv[0]
    cdef HamState st
    st.expansions = 0
    st.budget = budget
    st.epoch = 0
    st.n = n
    st.k = k
    used[0] = 1

    prefixes = []
    cdef int p1, p2
    if k == 2:
        prefixes = [()]
    elif k == 3:
        prefixes = [(p1,) for p1 in range(1, n)]
    else:
        prefixes = [(p1, p2) for p1 in range(1, n) for p2 in range(1, n) if p2 != p1]

    cdef unsigned long long mask
    cdef int res, i
    for prefix in prefixes:
        st.epoch += 1
        mask = 1
        for i in range(len(prefix)):
            path[i + 1] = prefix[i]
            used[prefix[i]] = 1
            mask |= 1ULL << (<int> prefix[i])
        res = ham_dfs(k - 1, mask, path, used, offsets, values, comb, table, &st)
        for i in range(len(prefix)):
            used[prefix[i]] = 0
        if res == FOUND:
            return (FOUND, [path[i] for i in range(n)], st.expansions)
        if res == TIMEOUT:
            return (TIMEOUT, None, st.expansions)
    return (NONE, None, st.expansions)


# ----------------------------------------------------------------- exact path

cdef struct PathState:
    long long expansions
    long long budget
    int n
    int k
    int inner


cdef int path_dfs(int placed, int* seq, int* target, unsigned char* used,
                  unsigned char[::1] allowed,
                  long long[::1] offsets, int[::1] values, long long[:, ::1] comb,
                  PathState* st):
    st.expansions += 1
    if st.expansions > st.budget:
        return TIMEOUT
    cdef int k = st.k
    cdef int depth = k - 2 + placed
    cdef int i, v, res
    cdef int tail[16]
    cdef int window[8]
    cdef long long r, idx
    if placed == st.inner:
        for i in range(k - 1):
            tail[i] = seq[depth - k + 2 + i]
            tail[k - 1 + i] = target[i]
        for i in range(k - 1):
            for v in range(k):
                window[v] = tail[i + v]
            sort_small(window, k)
            if not has_edge(window, k, offsets, values, comb):
                return NONE
        return FOUND
    for i in range(k - 1):
        window[i] = seq[depth - k + 2 + i]
    sort_small(window, k - 1)
    r = rank_sorted(window, k - 1, comb)
    for idx in range(offsets[r], offsets[r + 1]):
        v = values[idx]
        if used[v] or not allowed[v]:
            continue
        seq[depth + 1] = v
        used[v] = 1
        res = path_dfs(placed + 1, seq, target, used, allowed, offsets, values, comb, st)
        used[v] = 0
        if res != NONE:
            return res
    return NONE


def find_path_exact(int n, int k, long long[::1] offsets, int[::1] values,
                    long long[:, ::1] comb, start, target, int inner,
                    unsigned char[::1] allowed, long long budget):
    seq_arr = np.zeros(k - 1 + inner, dtype=np.int32)
    tgt_arr = np.asarray(target, dtype=np.int32)
    used_arr = np.zeros(n, dtype=np.uint8)
    cdef int[::1] seq_mv = seq_arr
    cdef int[::1] tgt_mv = tgt_arr
    cdef unsigned char[::1] used_mv = used_arr
    cdef int i
    for i in range(k - 1):
        seq_mv[i] = start[i]
        used_mv[start[i]] = 1
        used_mv[tgt_mv[i]] = 1
    cdef PathState st
    st.expansions = 0
    st.budget = budget
    st.n = n
    st.k = k
    st.inner = inner
    cdef int res = path_dfs(0, &seq_mv[0], &tgt_mv[0], &used_mv[0], allowed,
                            offsets, values, comb, &st)
    if res == FOUND:
        return (FOUND, [int(seq_mv[i]) for i in range(k - 1, k - 1 + inner)], st.expansions)
    return (res, None, st.expansions)


# ----------------------------------------------------------------- cover path

cdef struct CoverState:
    long long expansions
    long long budget
    int n
    int k
    int m_vertices


cdef long long ordered_rank(int* window, int size, int n):
    cdef long long r = 0
    cdef int i
    for i in range(size):
        r = r * n + window[i]
    return r


cdef int cover_dfs(int depth, int* seq, unsigned char* used,
                   unsigned char[::1] allowed, unsigned char[::1] end_ok,
                   long long[::1] offsets, int[::1] values, long long[:, ::1] comb,
                   CoverState* st):
    st.expansions += 1
    if st.expansions > st.budget:
        return TIMEOUT
    cdef int k = st.k
    cdef int i, v, res
    cdef int window[8]
    cdef long long r, idx
    if depth == st.m_vertices:
        if end_ok[ordered_rank(&seq[depth - k + 1], k - 1, st.n)]:
            return FOUND
        return NONE
    for i in range(k - 1):
        window[i] = seq[depth - k + 1 + i]
    sort_small(window, k - 1)
    r = rank_sorted(window, k - 1, comb)
    for idx in range(offsets[r], offsets[r + 1]):
        v = values[idx]
        if used[v] or not allowed[v]:
            continue
        seq[depth] = v
        used[v] = 1
        res = cover_dfs(depth + 1, seq, used, allowed, end_ok, offsets, values, comb, st)
        used[v] = 0
        if res != NONE:
            return res
    return NONE


def find_cover_path(int n, int k, long long[::1] offsets, int[::1] values,
                    long long[:, ::1] comb, int[:, ::1] starts, int m_vertices,
                    unsigned char[::1] allowed, unsigned char[::1] end_ok,
                    long long budget):
    seq_arr = np.zeros(m_vertices, dtype=np.int32)
    used_arr = np.zeros(n, dtype=np.uint8)
    cdef int[::1] seq_mv = seq_arr
    cdef unsigned char[::1] used_mv = used_arr
    cdef CoverState st
    st.expansions = 0
    st.budget = budget
    st.n = n
    st.k = k
    st.m_vertices = m_vertices
    cdef int rows = starts.shape[0]
    cdef int i, j, res, ok
    for i in range(rows):
        ok = 1
        for j in range(k - 1):
            if not allowed[starts[i, j]]:
                ok = 0
                break
        if not ok:
            continue
        if not end_ok[ordered_rank(<int*> &starts[i, 0], k - 1, n)]:
            continue
        for j in range(k - 1):
            seq_mv[j] = starts[i, j]
            used_mv[starts[i, j]] = 1
        res = cover_dfs(k - 1, &seq_mv[0], &used_mv[0], allowed, end_ok,
                        offsets, values, comb, &st)
        for j in range(k - 1):
            used_mv[starts[i, j]] = 0
        if res == FOUND:
            return (FOUND, [int(seq_mv[j]) for j in range(m_vertices)], st.expansions)
        if res == TIMEOUT:
            return (TIMEOUT, None, st.expansions)
    return (NONE, None, st.expansions)
