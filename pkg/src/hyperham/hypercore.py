"""k-uniform hypergraphs with canonical edge storage and exact degree queries.

The `Hypergraph` class is immutable: edges are kept as a row-lexicographically
sorted integer array (each row ascending), with a frozenset index for O(1)
membership.  Everything downstream (links, induced subhypergraphs, search
kernels) consumes the array form directly.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Hypergraph",
    "HypergraphError",
    "ParseError",
    "parse",
    "serialize",
]

# Vertices are stored as uint16; ranks and counts are computed in int64.
MAX_VERTICES = 65535
MIN_UNIFORMITY = 2
MAX_UNIFORMITY = 8


class HypergraphError(ValueError):
    """Invalid hypergraph data (bad uniformity, vertex range, arity...)."""


class ParseError(HypergraphError):
    """Malformed text input; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


def _canonical_edge(edge: Iterable[int], k: int, n: int) -> tuple[int, ...]:
    e = tuple(sorted(int(v) for v in edge))
    if len(e) != k:
        raise HypergraphError(f"edge {e} has {len(e)} vertices, expected {k}")
    if len(set(e)) != k:
        raise HypergraphError(f"edge {e} has repeated vertices")
    if e[0] < 0 or e[-1] >= n:
        raise HypergraphError(f"edge {e} has a vertex outside 0..{n - 1}")
    return e


class Hypergraph:
    """Immutable k-uniform hypergraph on vertex set {0, ..., n-1}."""

    __slots__ = ("k", "n", "_arr", "_edge_tuples", "_edge_set", "_ext_cache")

    def __init__(self, k: int, n: int, edges: Iterable[Iterable[int]]):
        if not isinstance(k, int) or not (MIN_UNIFORMITY <= k <= MAX_UNIFORMITY):
            raise HypergraphError(f"uniformity must be an integer in 2..8, got {k!r}")
        if not isinstance(n, int) or n < 0 or n > MAX_VERTICES:
            raise HypergraphError(f"vertex count must be an integer in 0..{MAX_VERTICES}, got {n!r}")
        canon = sorted({_canonical_edge(e, k, n) for e in edges})
        self.k = k
        self.n = n
        self._arr = np.array(canon, dtype=np.uint16).reshape(len(canon), k)
        self._edge_tuples: tuple[tuple[int, ...], ...] | None = tuple(canon)
        self._edge_set: frozenset[tuple[int, ...]] | None = None
        self._ext_cache: dict = {}

    @classmethod
    def _from_array(cls, k: int, n: int, arr: np.ndarray) -> "Hypergraph":
        """Trusted fast path: `arr` must already be canonical (rows ascending,
        row-lexicographically sorted, no duplicates, vertices < n)."""
        h = object.__new__(cls)
        h.k = k
        h.n = n
        h._arr = np.asarray(arr, dtype=np.uint16).reshape(-1, k)
        h._edge_tuples = None
        h._edge_set = None
        h._ext_cache = {}
        return h

    # ------------------------------------------------------------------ views

    @property
    def edges(self) -> tuple[tuple[int, ...], ...]:
        if self._edge_tuples is None:
            self._edge_tuples = tuple(map(tuple, self._arr.tolist()))
        return self._edge_tuples

    @property
    def edge_array(self) -> np.ndarray:
        """Read-only (m, k) uint16 view of the canonical edge list."""
        a = self._arr.view()
        a.flags.writeable = False
        return a

    @property
    def edge_set(self) -> frozenset[tuple[int, ...]]:
        if self._edge_set is None:
            self._edge_set = frozenset(self.edges)
        return self._edge_set

    def __len__(self) -> int:
        return self._arr.shape[0]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.edges)

    def __contains__(self, edge: Iterable[int]) -> bool:
        e = tuple(sorted(int(v) for v in edge))
        return e in self.edge_set

    def has_edge(self, *vertices: int) -> bool:
        return vertices in self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.k == other.k and self.n == other.n and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((self.k, self.n, self.edge_set))

    def __repr__(self) -> str:
        return f"Hypergraph(k={self.k}, n={self.n}, edges={len(self)})"

    # ---------------------------------------------------------------- queries

    def degree(self, subset: Iterable[int]) -> int:
        """Number of edges containing every vertex of `subset` (|subset| <= k)."""
        s = sorted(int(v) for v in subset)
        if len(set(s)) != len(s):
            raise HypergraphError(f"degree subset {s} has repeated vertices")
        if len(s) > self.k:
            raise HypergraphError(f"degree subset size {len(s)} exceeds uniformity {self.k}")
        if any(v < 0 or v >= self.n for v in s):
            raise HypergraphError(f"degree subset {s} has a vertex outside 0..{self.n - 1}")
        if not s:
            return len(self)
        if len(self) == 0:
            return 0
        mask = np.ones(len(self), dtype=bool)
        for v in s:
            mask &= (self._arr == v).any(axis=1)
        return int(mask.sum())

    def min_j_degree(self, j: int) -> tuple[int, frozenset[int]]:
        """Minimum degree over all j-subsets, with a lexicographically first witness."""
        if not isinstance(j, int) or not (1 <= j <= self.k):
            raise HypergraphError(f"j must be an integer in 1..{self.k}, got {j!r}")
        if self.n < j:
            raise HypergraphError(f"no {j}-subsets in a {self.n}-vertex universe")
        counts: dict[tuple[int, ...], int] = {}
        for e in self.edges:
            for s in itertools.combinations(e, j):
                counts[s] = counts.get(s, 0) + 1
        best = None
        witness = None
        for s in itertools.combinations(range(self.n), j):
            d = counts.get(s, 0)
            if best is None or d < best:
                best, witness = d, s
                if best == 0:
                    break
        return best, frozenset(witness)

    # ------------------------------------------------------------ derivations

    def link(self, subset: Iterable[int], drop_isolated_anchor: bool = False) -> "Hypergraph":
        """Link hypergraph {e - S : S ⊆ e ∈ E} of a set S with |S| < k.

        Without the flag the universe stays the same (the vertices of S become
        isolated); with it they are removed and the rest relabelled
        order-preservingly to 0..n-|S|-1.
        """
        s = sorted(int(v) for v in subset)
        if len(set(s)) != len(s):
            raise HypergraphError(f"link anchor {s} has repeated vertices")
        if not (0 < len(s) < self.k):
            raise HypergraphError(f"link anchor size must be in 1..{self.k - 1}, got {len(s)}")
        if any(v < 0 or v >= self.n for v in s):
            raise HypergraphError(f"link anchor {s} has a vertex outside 0..{self.n - 1}")
        kk = self.k - len(s)
        if len(self) == 0:
            arr = np.empty((0, kk), dtype=np.uint16)
        else:
            mask = np.ones(len(self), dtype=bool)
            for v in s:
                mask &= (self._arr == v).any(axis=1)
            rows = self._arr[mask]
            keep = ~np.isin(rows, np.array(s, dtype=np.uint16))
            arr = rows[keep].reshape(-1, kk)  # row order (hence lex order) survives
        out = Hypergraph._from_array(kk, self.n, arr)
        if drop_isolated_anchor:
            remaining = [v for v in range(self.n) if v not in set(s)]
            out, _ = out.induced(remaining)
        return out

    def induced(self, vertices: Iterable[int]) -> tuple["Hypergraph", tuple[int, ...]]:
        """Subhypergraph induced on `vertices`, relabelled to 0..|U|-1.

        Returns (hypergraph, mapping) where mapping[new] == old, ascending.
        """
        u = sorted(int(v) for v in vertices)
        if len(set(u)) != len(u):
            raise HypergraphError(f"induced set has repeated vertices")
        if any(v < 0 or v >= self.n for v in u):
            raise HypergraphError(f"induced set has a vertex outside 0..{self.n - 1}")
        relabel = np.full(self.n, -1, dtype=np.int64)
        for new, old in enumerate(u):
            relabel[old] = new
        if len(self) == 0:
            arr = np.empty((0, self.k), dtype=np.uint16)
        else:
            inside = np.isin(self._arr, np.array(u, dtype=np.uint16)).all(axis=1)
            arr = relabel[self._arr[inside].astype(np.int64)].astype(np.uint16)
            # relabelling is order-preserving, so rows stay ascending and row order stays lex
        return Hypergraph._from_array(self.k, len(u), arr), tuple(u)


# -------------------------------------------------------------------- text io


def parse(text: str) -> Hypergraph:
    """Parse the plain text format: header "k n", one ascending edge per line.

    Blank lines and lines starting with '#' are ignored.  Errors carry the
    1-based line number of the offending line.
    """
    header: tuple[int, int] | None = None
    header_line = 0
    rows: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(values) != 2:
                raise ParseError("header must be exactly 'k n'", lineno)
            k, n = values
            if not (MIN_UNIFORMITY <= k <= MAX_UNIFORMITY):
                raise ParseError(f"uniformity {k} outside 2..8", lineno)
            if n < 0 or n > MAX_VERTICES:
                raise ParseError(f"vertex count {n} outside 0..{MAX_VERTICES}", lineno)
            header = (k, n)
            header_line = lineno
            continue
        k, n = header
        if len(values) != k:
            raise ParseError(f"edge has {len(values)} vertices, expected {k}", lineno)
        if any(v < 0 or v >= n for v in values):
            raise ParseError("vertex out of range", lineno)
        if len(set(values)) != k:
            raise ParseError("repeated vertex in edge", lineno)
        if any(values[i] >= values[i + 1] for i in range(k - 1)):
            raise ParseError("edge vertices must be strictly ascending", lineno)
        e = tuple(values)
        if e in seen:
            raise ParseError(f"duplicate edge (first seen on line {seen[e]})", lineno)
        seen[e] = lineno
        rows.append(e)
    if header is None:
        raise ParseError("missing 'k n' header", 1)
    del header_line
    return Hypergraph(header[0], header[1], rows)


def serialize(h: Hypergraph) -> str:
    """Canonical text form: lex-sorted edges, ascending vertices, LF endings."""
    lines = [f"{h.k} {h.n}"]
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"
