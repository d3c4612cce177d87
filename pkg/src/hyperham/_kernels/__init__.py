"""Kernel backend selection and the shared window index.

The compiled backend is used when importable; `HYPERHAM_PURE=1` forces the
pure-Python twin.  Both expose the same three functions with identical
traversal order, so swapping backends never changes a result.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from . import pycore

try:  # pragma: no cover - build environment dependent
    from . import fastcore
except ImportError:  # pragma: no cover
    fastcore = None

if os.environ.get("HYPERHAM_PURE") == "1" or fastcore is None:
    _impl = pycore
else:
    _impl = fastcore

BACKEND = _impl.BACKEND_NAME
FOUND = pycore.FOUND
NONE = pycore.NONE
TIMEOUT = pycore.TIMEOUT

STATUS_NAMES = {FOUND: "found", NONE: "none", TIMEOUT: "timeout"}


def available_backends() -> tuple[str, ...]:
    names = [pycore.BACKEND_NAME]
    if fastcore is not None:
        names.append(fastcore.BACKEND_NAME)
    return tuple(names)


class WindowIndex(NamedTuple):
    """Extension index over (k-1)-subsets, colexicographically ranked.

    offsets/values: CSR buckets of extension vertices (ascending per bucket).
    comb:           Pascal table, comb[x, j] = C(x, j), for ranking.
    window_sets:    the distinct (k-1)-subsets that occur inside edges,
                    one ascending row each, in rank order.
    """

    n: int
    k: int
    offsets: np.ndarray
    values: np.ndarray
    comb: np.ndarray
    window_sets: np.ndarray


def _comb_table(n: int, k: int) -> np.ndarray:
    comb = np.zeros((max(n, 1) + 1, k + 1), dtype=np.int64)
    comb[:, 0] = 1
    for j in range(1, k + 1):
        # C(x, j) = C(x-1, j) + C(x-1, j-1), rowwise cumulative
        comb[1:, j] = np.cumsum(comb[:-1, j - 1])
    return comb


def _colex_ranks(rows: np.ndarray, comb: np.ndarray) -> np.ndarray:
    ranks = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        ranks += comb[rows[:, j].astype(np.int64), j + 1]
    return ranks


def window_index(h) -> WindowIndex:
    """Build (and cache on the hypergraph) the extension index."""
    cached = h._ext_cache.get("window_index")
    if cached is not None:
        return cached
    n, k = h.n, h.k
    arr = h.edge_array.astype(np.int64)
    m = arr.shape[0]
    comb = _comb_table(n, k)
    n_buckets = int(comb[n, k - 1]) if n >= k - 1 else 0
    if m == 0:
        idx = WindowIndex(
            n, k,
            np.zeros(n_buckets + 1, dtype=np.int64),
            np.zeros(0, dtype=np.int32),
            comb,
            np.zeros((0, k - 1), dtype=np.int32),
        )
        h._ext_cache["window_index"] = idx
        return idx
    cols = np.arange(k)
    rank_parts = []
    vert_parts = []
    subset_parts = []
    for drop in range(k):
        sub = arr[:, cols != drop]  # rows stay ascending
        rank_parts.append(_colex_ranks(sub, comb))
        vert_parts.append(arr[:, drop])
        subset_parts.append(sub)
    ranks = np.concatenate(rank_parts)
    verts = np.concatenate(vert_parts)
    order = np.lexsort((verts, ranks))
    ranks = ranks[order]
    verts = verts[order].astype(np.int32)
    counts = np.bincount(ranks, minlength=n_buckets)
    offsets = np.zeros(n_buckets + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    subsets = np.concatenate(subset_parts)[order]
    # one representative row per occupied bucket, in rank order
    first = np.ones(len(ranks), dtype=bool)
    first[1:] = ranks[1:] != ranks[:-1]
    window_sets = subsets[first].astype(np.int32)
    idx = WindowIndex(n, k, offsets, verts, comb, np.ascontiguousarray(window_sets))
    h._ext_cache["window_index"] = idx
    return idx


def ordered_rank(window, n: int) -> int:
    r = 0
    for v in window:
        r = r * n + int(v)
    return r


def find_ham_cycle(idx: WindowIndex, budget: int):
    code, cycle, expansions = _impl.find_ham_cycle(
        idx.n, idx.k, idx.offsets, idx.values, idx.comb, budget
    )
    return STATUS_NAMES[code], cycle, expansions


def find_path_exact(idx: WindowIndex, start, target, inner: int, allowed: np.ndarray, budget: int):
    start = [int(v) for v in start]
    target = [int(v) for v in target]
    if len(start) != idx.k - 1 or len(target) != idx.k - 1:
        raise ValueError(f"start/target must be ordered {idx.k - 1}-tuples")
    if set(start) & set(target):
        raise ValueError("start and target tuples overlap")
    allowed = np.ascontiguousarray(allowed, dtype=np.uint8)
    code, inner_path, expansions = _impl.find_path_exact(
        idx.n, idx.k, idx.offsets, idx.values, idx.comb,
        start, target, int(inner), allowed, budget,
    )
    return STATUS_NAMES[code], inner_path, expansions


def find_cover_path(idx: WindowIndex, starts: np.ndarray, m_vertices: int,
                    allowed: np.ndarray, end_ok: np.ndarray, budget: int):
    starts = np.ascontiguousarray(starts, dtype=np.int32).reshape(-1, idx.k - 1)
    allowed = np.ascontiguousarray(allowed, dtype=np.uint8)
    end_ok = np.ascontiguousarray(end_ok, dtype=np.uint8)
    code, path, expansions = _impl.find_cover_path(
        idx.n, idx.k, idx.offsets, idx.values, idx.comb,
        starts, int(m_vertices), allowed, end_ok, budget,
    )
    return STATUS_NAMES[code], path, expansions


def cover_start_tuples(idx: WindowIndex) -> np.ndarray:
    """All ordered (k-1)-tuples that occur as a window inside some edge, in
    (bucket, permutation) order.  Cached; callers filter by end predicate."""
    import itertools

    # window_sets rows are ascending; expand into all orderings
    sets = idx.window_sets
    if sets.shape[0] == 0:
        return np.zeros((0, idx.k - 1), dtype=np.int32)
    perms = list(itertools.permutations(range(idx.k - 1)))
    blocks = [sets[:, list(p)] for p in perms]
    stacked = np.stack(blocks, axis=1).reshape(-1, idx.k - 1)
    return np.ascontiguousarray(stacked, dtype=np.int32)
