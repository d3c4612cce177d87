"""Extremal constructions and seeded random hosts.

The two labeled constructions partition the universe into X (two thirds) and
Y (one third) and keep exactly the quadruples whose X-intersection avoids one
forbidden value (2 for construction A, 3 for construction B).  Both have large
minimum pair degree yet no tight Hamiltonian cycle, which is what makes them
the boundary cases for the search pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .hypercore import Hypergraph, HypergraphError

__all__ = [
    "LabeledPartition",
    "GenerationError",
    "GenerationResult",
    "construction_a",
    "construction_b",
    "random_hypergraph",
    "random_with_min_pair_degree",
]


class GenerationError(RuntimeError):
    """Raised when seeded generation cannot meet its postcondition."""


@dataclass(frozen=True)
class LabeledPartition:
    """The (X, Y) split of a construction plus its forbidden X-intersection."""

    x: frozenset
    y: frozenset
    forbidden_intersection: int

    @property
    def n(self) -> int:
        return len(self.x) + len(self.y)


def _partition_construction(n: int, forbidden: int) -> tuple[Hypergraph, LabeledPartition]:
    if not isinstance(n, int) or n < 6 or n % 3 != 0:
        raise HypergraphError(f"construction needs n divisible by 3 and >= 6, got {n!r}")
    x_size = 2 * n // 3
    edges = [
        e
        for e in itertools.combinations(range(n), 4)
        if sum(1 for v in e if v < x_size) != forbidden
    ]
    part = LabeledPartition(
        x=frozenset(range(x_size)),
        y=frozenset(range(x_size, n)),
        forbidden_intersection=forbidden,
    )
    return Hypergraph(4, n, edges), part


def construction_a(n: int) -> tuple[Hypergraph, LabeledPartition]:
    """Quadruples with |e ∩ X| != 2, X the first 2n/3 vertices."""
    return _partition_construction(n, 2)


def construction_b(n: int) -> tuple[Hypergraph, LabeledPartition]:
    """Quadruples with |e ∩ X| != 3."""
    return _partition_construction(n, 3)


def random_hypergraph(n: int, k: int, p: float, seed: int) -> Hypergraph:
    """Binomial k-uniform hypergraph: each k-set kept with probability p.

    Deterministic for fixed (n, k, p, seed); draws follow lexicographic
    k-set order.
    """
    if not (0.0 <= p <= 1.0):
        raise HypergraphError(f"probability must be in [0, 1], got {p}")
    if not isinstance(k, int) or k < 2 or k > 8:
        raise HypergraphError(f"uniformity must be in 2..8, got {k!r}")
    if not isinstance(n, int) or n < 0:
        raise HypergraphError(f"vertex count must be a nonnegative integer, got {n!r}")
    if n < k:
        return Hypergraph(k, n, [])
    combos = np.array(list(itertools.combinations(range(n), k)), dtype=np.uint16)
    rng = np.random.Generator(np.random.PCG64(seed))
    keep = rng.random(combos.shape[0]) < p
    return Hypergraph._from_array(k, n, combos[keep])


@dataclass(frozen=True)
class GenerationResult:
    hypergraph: Hypergraph
    repairs: int
    resamples: int


def _pair_degree_matrix(arr: np.ndarray, n: int) -> np.ndarray:
    deg = np.zeros((n, n), dtype=np.int64)
    k = arr.shape[1]
    a64 = arr.astype(np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            np.add.at(deg, (a64[:, i], a64[:, j]), 1)
    return deg  # upper triangle only (rows ascending)


def random_with_min_pair_degree(
    n: int, target: int, p: float, seed: int, max_retries: int = 10
) -> GenerationResult:
    """Binomial 4-uniform host repaired until every pair degree reaches `target`.

    Repairs add the lexicographically first missing quadruple through the
    currently worst pair; resampling with a derived seed kicks in should a
    repair pass exceed its budget.
    """
    if not isinstance(n, int) or n < 4:
        raise HypergraphError(f"need n >= 4 for a 4-uniform host, got {n!r}")
    max_pair = (n - 2) * (n - 3) // 2
    if not isinstance(target, int) or target < 0 or target > max_pair:
        raise HypergraphError(
            f"target pair degree must be in 0..C(n-2,2)={max_pair}, got {target!r}"
        )
    repair_budget = n**3
    for attempt in range(max_retries):
        child_seed = np.random.SeedSequence(entropy=seed, spawn_key=(attempt,))
        h = random_hypergraph(n, 4, p, child_seed)
        edge_set = set(h.edges)
        deg = _pair_degree_matrix(h.edge_array, n)
        repairs = 0
        feasible = True
        while feasible:
            worst = target
            pair = None
            for a in range(n):
                for b in range(a + 1, n):
                    if deg[a, b] < worst:
                        worst = deg[a, b]
                        pair = (a, b)
            if pair is None:
                return GenerationResult(Hypergraph(4, n, edge_set), repairs, attempt)
            if repairs >= repair_budget:
                feasible = False
                break
            added = None
            a, b = pair
            for c, d in itertools.combinations((v for v in range(n) if v not in pair), 2):
                e = tuple(sorted((a, b, c, d)))
                if e not in edge_set:
                    added = e
                    break
            if added is None:  # pair already saturated yet below target: impossible
                feasible = False
                break
            edge_set.add(added)
            repairs += 1
            for u, v in itertools.combinations(added, 2):
                deg[u, v] += 1
    raise GenerationError(
        f"could not reach pair degree {target} on n={n} after {max_retries} attempts"
    )
