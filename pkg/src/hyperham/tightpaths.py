"""Tight walks, paths, cycles: validation, brute search, splicing, covers.

A tight sequence in a k-uniform hypergraph is one where every k consecutive
vertices form an edge; cycles wrap around.  `validate` is the single source of
truth — every search routine in the package re-certifies its output here
before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels as kernels
from .hypercore import Hypergraph, HypergraphError

__all__ = [
    "TightWalk",
    "TightPath",
    "TightCycle",
    "ValidationCertificate",
    "ValidationViolation",
    "SpliceError",
    "BruteResult",
    "CoverResult",
    "validate",
    "is_valid",
    "end_triples",
    "splice",
    "find_tight_hamiltonian_brute",
    "greedy_path_cover",
]

BRUTE_DEFAULT_CAP = 16


@dataclass(frozen=True)
class TightWalk:
    """Vertex sequence whose every k-window is an edge (repeats allowed)."""

    k: int
    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        # number of edges along the walk
        return len(self.vertices) - self.k + 1


@dataclass(frozen=True)
class TightPath(TightWalk):
    """Tight walk on distinct vertices."""

    @property
    def end_tuples(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return end_triples(self)


@dataclass(frozen=True)
class TightCycle(TightWalk):
    """Cyclically tight sequence on distinct vertices."""


class SpliceError(ValueError):
    def __init__(self, message: str, vertex: int | None = None):
        super().__init__(message)
        self.vertex = vertex


@dataclass(frozen=True)
class ValidationCertificate:
    kind: str
    vertices: tuple[int, ...]
    windows: tuple[tuple[int, ...], ...]  # every checked window, in order

    @property
    def ok(self) -> bool:
        return True


@dataclass(frozen=True)
class ValidationViolation:
    kind: str
    reason: str  # "window" or "duplicate"
    window_index: int | None = None
    window: tuple[int, ...] | None = None
    vertex: int | None = None

    @property
    def ok(self) -> bool:
        return False


def _seq_of(obj) -> tuple[int, ...]:
    if isinstance(obj, TightWalk):
        return obj.vertices
    return tuple(int(v) for v in obj)


def validate(seq, h: Hypergraph, kind: str = "path"):
    """Check a sequence against a host; returns a certificate or the first
    violation (failing window, or repeated vertex for path/cycle kinds)."""
    if kind not in ("walk", "path", "cycle"):
        raise HypergraphError(f"kind must be walk, path or cycle, got {kind!r}")
    vs = _seq_of(seq)
    minimum = h.k + 1 if kind == "cycle" else h.k
    if len(vs) < minimum:
        raise HypergraphError(
            f"a tight {kind} needs at least {minimum} vertices, got {len(vs)}"
        )
    if any(v < 0 or v >= h.n for v in vs):
        bad = next(v for v in vs if v < 0 or v >= h.n)
        raise HypergraphError(f"vertex {bad} outside 0..{h.n - 1}")
    if kind in ("path", "cycle"):
        seen: set[int] = set()
        for v in vs:
            if v in seen:
                return ValidationViolation(kind=kind, reason="duplicate", vertex=v)
            seen.add(v)
    count = len(vs) if kind == "cycle" else len(vs) - h.k + 1
    windows = []
    for s in range(count):
        if kind == "cycle":
            w = tuple(vs[(s + i) % len(vs)] for i in range(h.k))
        else:
            w = tuple(vs[s : s + h.k])
        if w not in h:
            return ValidationViolation(kind=kind, reason="window", window_index=s, window=w)
        windows.append(w)
    return ValidationCertificate(kind=kind, vertices=vs, windows=tuple(windows))


def is_valid(seq, h: Hypergraph, kind: str = "path") -> bool:
    return validate(seq, h, kind).ok


def end_triples(path, k: int | None = None) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Ordered first and last (k-1)-tuples of a path; for k=4 these are the
    end triples, e.g. (a,b,c,d) -> ((a,b,c), (b,c,d))."""
    if isinstance(path, TightWalk):
        vs, k = path.vertices, path.k
    else:
        vs = tuple(int(v) for v in path)
        if k is None:
            raise HypergraphError("k required when passing a raw sequence")
    if len(vs) < k - 1:
        raise HypergraphError(f"sequence shorter than k-1 = {k - 1}")
    return vs[: k - 1], vs[len(vs) - (k - 1) :]


def splice(p, q, connector, h: Hypergraph) -> TightPath:
    """Join paths P and Q through a connector path that starts with P's end
    tuple and ends with Q's start tuple.  The concatenation is revalidated."""
    k = h.k
    pv, qv = _seq_of(p), _seq_of(q)
    cv = _seq_of(connector)
    p_end = pv[len(pv) - (k - 1) :]
    q_start = qv[: k - 1]
    if cv[: k - 1] != p_end:
        raise SpliceError(
            f"connector must start with {p_end}, starts with {cv[: k - 1]}"
        )
    if cv[len(cv) - (k - 1) :] != q_start:
        raise SpliceError(
            f"connector must end with {q_start}, ends with {cv[len(cv) - (k - 1):]}"
        )
    inner = cv[k - 1 : len(cv) - (k - 1)]
    combined = pv + inner + qv
    seen: set[int] = set()
    for v in combined:
        if v in seen:
            raise SpliceError(f"vertex {v} appears twice across the splice", vertex=v)
        seen.add(v)
    result = validate(combined, h, "path")
    if not result.ok:
        raise SpliceError(f"spliced sequence invalid: {result}")
    return TightPath(k=k, vertices=combined)


# ------------------------------------------------------------------- searches


@dataclass(frozen=True)
class BruteResult:
    status: str  # found / none / timeout
    cycle: TightCycle | None
    expansions: int

    @property
    def exhaustive(self) -> bool:
        return self.status in ("found", "none")


def find_tight_hamiltonian_brute(
    h: Hypergraph, budget: int = 10**8, n_cap: int = BRUTE_DEFAULT_CAP
) -> BruteResult:
    """Exhaustive anchored DFS for a tight Hamiltonian cycle (k = 3 or 4).

    `none` means the whole reflected-and-rotated search space was exhausted;
    `timeout` reports the expansion count at which the budget ran out.
    """
    if h.k not in (3, 4):
        raise HypergraphError(f"brute search supports k in {{3, 4}}, got k={h.k}")
    if not isinstance(budget, int) or budget <= 0:
        raise HypergraphError(f"budget must be a positive integer, got {budget!r}")
    if h.n > n_cap:
        raise HypergraphError(f"n={h.n} exceeds the brute-search cap {n_cap}")
    idx = kernels.window_index(h)
    status, cycle, expansions = kernels.find_ham_cycle(idx, budget)
    out = None
    if status == "found":
        out = TightCycle(k=h.k, vertices=tuple(cycle))
        cert = validate(out, h, "cycle")
        if not cert.ok:  # defensive: kernels must only emit certified cycles
            raise AssertionError(f"kernel returned an invalid cycle: {cert}")
    return BruteResult(status=status, cycle=out, expansions=expansions)


@dataclass(frozen=True)
class CoverResult:
    paths: tuple[TightPath, ...]
    uncovered: frozenset
    maximal_certified: bool  # final no-extension pass ran to exhaustion
    expansions: int


def _end_ok_array(h: Hypergraph, end_predicate) -> np.ndarray:
    size = h.n ** (h.k - 1)
    if end_predicate is None:
        return np.ones(size, dtype=np.uint8)
    if isinstance(end_predicate, np.ndarray):
        flat = end_predicate.reshape(-1)
        if flat.shape[0] != size:
            raise HypergraphError(
                f"end predicate array must have n^(k-1) = {size} entries"
            )
        return flat.astype(np.uint8)
    import itertools as it

    arr = np.zeros(size, dtype=np.uint8)
    for tup in it.permutations(range(h.n), h.k - 1):
        if end_predicate(tup):
            arr[kernels.ordered_rank(tup, h.n)] = 1
    return arr


def greedy_path_cover(
    h: Hypergraph,
    x_excluded: Iterable[int],
    m_vertices: int,
    end_predicate: Callable[[tuple[int, ...]], bool] | np.ndarray | None = None,
    budget: int = 10**8,
) -> CoverResult:
    """Vertex-disjoint M-vertex tight paths avoiding X, greedily maximal.

    Every path's two ordered end (k-1)-tuples satisfy the predicate.  The
    final failed search is exhaustive unless the budget interrupted it, which
    `maximal_certified` reports.
    """
    if m_vertices < h.k + 1:
        raise HypergraphError(f"cover paths need at least k+1 = {h.k + 1} vertices")
    excluded = set(int(v) for v in x_excluded)
    if any(v < 0 or v >= h.n for v in excluded):
        raise HypergraphError("excluded set has a vertex outside the universe")
    allowed = np.ones(h.n, dtype=np.uint8)
    for v in excluded:
        allowed[v] = 0
    if m_vertices > h.n:
        return CoverResult((), frozenset(range(h.n)) - excluded, True, 0)
    idx = kernels.window_index(h)
    end_ok = _end_ok_array(h, end_predicate)
    starts = kernels.cover_start_tuples(idx)
    paths: list[TightPath] = []
    total = 0
    certified = False
    while True:
        status, path, exp = kernels.find_cover_path(
            idx, starts, m_vertices, allowed, end_ok, budget - total
        )
        total += exp
        if status == "found":
            p = TightPath(k=h.k, vertices=tuple(path))
            cert = validate(p, h, "path")
            if not cert.ok:
                raise AssertionError(f"kernel returned an invalid cover path: {cert}")
            paths.append(p)
            for v in path:
                allowed[v] = 0
            continue
        certified = status == "none"
        break
    uncovered = frozenset(v for v in range(h.n) if allowed[v])
    return CoverResult(tuple(paths), uncovered, certified, total)
