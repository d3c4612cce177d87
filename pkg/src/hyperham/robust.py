"""Robustly connected graphs: exact path counting, certificates, extraction.

Graphs here are ordinary 2-graphs given as square boolean adjacency matrices
(symmetric, zero diagonal).  A graph is (beta, ell)-robust when every pair of
distinct vertices is joined by at least beta * n^(ell-1) paths with exactly
ell edges, all vertices distinct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .hypercore import Hypergraph, HypergraphError

__all__ = [
    "ExtractionFailure",
    "RobustnessCheck",
    "RobustConstants",
    "RobustCertificate",
    "as_adjacency",
    "graph_from_edges",
    "adjacency_from_hypergraph",
    "count_paths_fixed_length",
    "paths_matrix",
    "is_robust",
    "count_walks_length3",
    "blakley_roy_gap",
    "robust_constants",
    "extract_robust_subgraph",
    "check_lemma_L36",
]

PATH_LENGTH_CAP = 8


class ExtractionFailure(RuntimeError):
    """No certified subgraph within budget; `clause` names the blocker."""

    def __init__(self, message: str, clause: str):
        super().__init__(message)
        self.clause = clause


def as_adjacency(adj: np.ndarray) -> np.ndarray:
    a = np.asarray(adj)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise HypergraphError(f"adjacency matrix must be square, got {a.shape}")
    a = a.astype(bool)
    if a.shape[0] and np.any(np.diagonal(a)):
        raise HypergraphError("adjacency matrix has a nonzero diagonal (loop)")
    if not np.array_equal(a, a.T):
        raise HypergraphError("adjacency matrix must be symmetric")
    return a


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> np.ndarray:
    a = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise HypergraphError(f"bad edge ({u}, {v}) for n={n}")
        a[u, v] = a[v, u] = True
    return a


def adjacency_from_hypergraph(h: Hypergraph) -> np.ndarray:
    if h.k != 2:
        raise HypergraphError(f"need a 2-uniform hypergraph, got k={h.k}")
    a = np.zeros((h.n, h.n), dtype=bool)
    arr = h.edge_array
    if len(arr):
        a[arr[:, 0], arr[:, 1]] = True
        a[arr[:, 1], arr[:, 0]] = True
    return a


# --------------------------------------------------------------- path counts


def count_paths_fixed_length(
    adj: np.ndarray, x: int, y: int, ell: int, cap: int = PATH_LENGTH_CAP
) -> int:
    """Exact number of x-y paths with `ell` edges and all vertices distinct,
    by DFS with on-path exclusion."""
    a = as_adjacency(adj)
    n = a.shape[0]
    if not (0 <= x < n and 0 <= y < n) or x == y:
        raise HypergraphError(f"need distinct vertices in range, got x={x}, y={y}")
    if ell < 1:
        raise HypergraphError(f"path length must be >= 1, got {ell}")
    if ell > cap:
        raise HypergraphError(f"path length {ell} exceeds the cost cap {cap}")
    neighbors = [np.flatnonzero(a[v]).tolist() for v in range(n)]
    on_path = bytearray(n)
    on_path[x] = 1

    def dfs(v: int, remaining: int) -> int:
        if remaining == 1:
            return 1 if a[v, y] and not on_path[y] else 0
        total = 0
        for w in neighbors[v]:
            if not on_path[w] and w != y:
                on_path[w] = 1
                total += dfs(w, remaining - 1)
                on_path[w] = 0
        return total

    return dfs(x, ell)


def paths_matrix(adj: np.ndarray, ell: int) -> np.ndarray:
    """All-pairs exact path counts for ell in {1, 2, 3} via closed forms.

    Off-diagonal entries only are meaningful.  For ell = 3 the walk count
    A^3[x,y] overcounts exactly by A[x,y] * (d(x) + d(y) - 1): walks that
    revisit x or y (a 3-walk cannot repeat any other vertex).
    """
    a = as_adjacency(adj).astype(np.int64)
    if ell == 1:
        return a.copy()
    if ell == 2:
        return a @ a
    if ell == 3:
        deg = a.sum(axis=1)
        w3 = a @ a @ a
        return w3 - a * (deg[:, None] + deg[None, :] - 1)
    raise HypergraphError(f"closed forms cover ell in {{1,2,3}}, got {ell}")


@dataclass(frozen=True)
class RobustnessCheck:
    ok: bool
    beta: float
    ell: int
    n: int
    threshold: float  # beta * n^(ell-1)
    worst_pair: tuple[int, int] | None
    worst_count: int | None

    @property
    def min_ratio(self) -> float:
        # worst pair count / n^(ell-1); infinity when no pair exists
        if self.worst_count is None:
            return math.inf
        return self.worst_count / float(self.n ** (self.ell - 1))


def is_robust(
    adj: np.ndarray, beta: float, ell: int, cap: int = PATH_LENGTH_CAP
) -> RobustnessCheck:
    """Check (beta, ell)-robustness of the whole matrix; callers wanting an
    induced subgraph should slice first.  Returns the minimizing pair."""
    a = as_adjacency(adj)
    n = a.shape[0]
    if ell < 1:
        raise HypergraphError(f"ell must be >= 1, got {ell}")
    if ell > cap:
        raise HypergraphError(f"ell {ell} exceeds the cost cap {cap}")
    threshold = beta * float(n) ** (ell - 1)
    if n < 2:
        return RobustnessCheck(True, beta, ell, n, threshold, None, None)
    if ell <= 3:
        counts = paths_matrix(a, ell)
        iu = np.triu_indices(n, k=1)
        flat = counts[iu]
        pos = int(np.argmin(flat))
        worst = (int(iu[0][pos]), int(iu[1][pos]))
        worst_count = int(flat[pos])
    else:
        worst = None
        worst_count = None
        for x in range(n):
            for y in range(x + 1, n):
                c = count_paths_fixed_length(a, x, y, ell, cap)
                if worst_count is None or c < worst_count:
                    worst, worst_count = (x, y), c
    return RobustnessCheck(
        ok=worst_count >= threshold,
        beta=beta,
        ell=ell,
        n=n,
        threshold=threshold,
        worst_pair=worst,
        worst_count=worst_count,
    )


# ------------------------------------------------- Blakley-Roy (3-edge walks)


def count_walks_length3(adj: np.ndarray) -> int:
    """Ordered homomorphism count of the 3-edge path (sum of A^3 entries)."""
    a = as_adjacency(adj).astype(object)  # exact integer arithmetic
    return int((a @ a @ a).sum())


@dataclass(frozen=True)
class BlakleyRoyGap:
    walks: int
    bound: float  # (2e)^3 / n^2
    gap: float
    # exact integer cross-multiplied comparison: walks * n^2 >= (2e)^3
    walks_times_n2: int
    two_e_cubed: int

    @property
    def holds_exactly(self) -> bool:
        return self.walks_times_n2 >= self.two_e_cubed


def blakley_roy_gap(adj: np.ndarray) -> BlakleyRoyGap:
    """Power-mean bound for 3-edge walks: walks >= (2e)^3 / n^2, compared in
    exact integers (equality exactly on regular graphs)."""
    a = as_adjacency(adj)
    n = a.shape[0]
    walks = count_walks_length3(a) if n else 0
    e2 = int(a.sum())  # = 2 * edge count
    if n == 0:
        return BlakleyRoyGap(0, 0.0, 0.0, 0, 0)
    bound = e2**3 / n**2
    return BlakleyRoyGap(
        walks=walks,
        bound=bound,
        gap=walks - bound,
        walks_times_n2=walks * n * n,
        two_e_cubed=e2**3,
    )


# ----------------------------------------------------------------- constants


def _as_fraction(x) -> Fraction:
    # floats go through their shortest decimal repr so that inputs like 0.36
    # mean the decimal 36/100, keeping boundary arithmetic exact
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class RobustConstants:
    mu_prime: Fraction
    ell: int
    log2_beta: float
    beta_mantissa: float  # beta = mantissa * 2**exponent, mantissa in [0.5, 1)
    beta_exponent: int
    beta: float  # 0.0 when subnormal/underflowed

    def to_dict(self) -> dict:
        return {
            "mu_prime": [self.mu_prime.numerator, self.mu_prime.denominator],
            "ell": self.ell,
            "log2_beta": self.log2_beta,
            "beta_mantissa": self.beta_mantissa,
            "beta_exponent": self.beta_exponent,
            "beta": self.beta,
        }


def robust_constants(alpha, mu) -> RobustConstants:
    """mu' = min(mu/4, alpha/72); ell = least odd integer > 8(1/mu')^2 + 1;
    beta = (1/72)(mu'/2)^(6 ell), returned in log2 space since it underflows."""
    af, mf = _as_fraction(alpha), _as_fraction(mu)
    if not (0 < af < 1):
        raise HypergraphError(f"alpha must be in (0, 1), got {alpha}")
    if mf <= 0:
        raise HypergraphError(f"mu must be positive, got {mu}")
    mu_prime = min(mf / 4, af / 72)
    bound = 8 / mu_prime**2 + 1  # exact rational
    ell = math.floor(bound) + 1  # least integer strictly above
    if ell % 2 == 0:
        ell += 1
    half = mu_prime / 2
    log2_beta = (
        -math.log2(72)
        + 6 * ell * (math.log2(half.numerator) - math.log2(half.denominator))
    )
    exponent = math.floor(log2_beta) + 1
    mantissa = 2.0 ** (log2_beta - exponent)
    beta = math.ldexp(mantissa, exponent) if exponent > -1074 else 0.0
    return RobustConstants(mu_prime, ell, log2_beta, mantissa, exponent, beta)


# ---------------------------------------------------------------- extraction


@dataclass(frozen=True)
class RobustCertificate:
    """Induced subgraph certificate; every number is recomputable from
    (host adjacency, vertices)."""

    vertices: tuple[int, ...]  # sorted
    n_host: int
    alpha: float
    beta: float
    ell: int
    mu: float
    min_pair_count: int | None
    min_ratio: float
    worst_pair: tuple[int, int] | None  # labels within the host
    cut: int  # e_G(U, V \ U)
    edges: int  # e(G[U])
    mode: str
    paper_constants: dict | None = None  # asymptotic-mode (mu', ell, beta) record

    @property
    def size(self) -> int:
        return len(self.vertices)

    def clause_values(self) -> dict:
        n = self.n_host
        return {
            "size": (self.size, (2 / 3 + self.alpha / 2) * n),
            "cut": (self.cut, self.mu * n * n),
            "edges": (
                self.edges,
                (5 / 9 + self.alpha / 2) * n * n / 2 - (n - self.size) ** 2 / 2,
            ),
            "robust": (self.min_ratio, self.beta),
        }

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "n_host": self.n_host,
            "alpha": self.alpha,
            "beta": self.beta,
            "ell": self.ell,
            "mu": self.mu,
            "min_pair_count": self.min_pair_count,
            "min_ratio": self.min_ratio,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "cut": self.cut,
            "edges": self.edges,
            "mode": self.mode,
            "clauses": {k: [float(a), float(b)] for k, (a, b) in self.clause_values().items()},
        }


def _clause_check(a: np.ndarray, u: np.ndarray, alpha: float, beta: float,
                  ell: int, mu: float) -> tuple[str | None, RobustnessCheck, int, int]:
    """Evaluate all four certificate clauses for U (bool mask over the host);
    returns (first failing clause name or None, robustness check, cut, edges)."""
    n = a.shape[0]
    size = int(u.sum())
    sub = a[np.ix_(u, u)]
    edges = int(sub.sum()) // 2
    cut = int(a[np.ix_(u, ~u)].sum())
    rc = is_robust(sub, beta, ell)
    if size < (2 / 3 + alpha / 2) * n:
        return "size", rc, cut, edges
    if cut > mu * n * n:
        return "cut", rc, cut, edges
    if edges < (5 / 9 + alpha / 2) * n * n / 2 - (n - size) ** 2 / 2:
        return "edges", rc, cut, edges
    if not rc.ok:
        return "robustness", rc, cut, edges
    return None, rc, cut, edges


def _certificate(a, u, alpha, beta, ell, mu, mode, paper_constants):
    failing, rc, cut, edges = _clause_check(a, u, alpha, beta, ell, mu)
    if failing is not None:  # defensive: callers only certify passing masks
        raise AssertionError(f"internal: clause {failing} failed at certification")
    labels = np.flatnonzero(u)
    worst = None
    if rc.worst_pair is not None:
        worst = (int(labels[rc.worst_pair[0]]), int(labels[rc.worst_pair[1]]))
    return RobustCertificate(
        vertices=tuple(int(v) for v in labels),
        n_host=a.shape[0],
        alpha=float(alpha),
        beta=float(beta),
        ell=int(ell),
        mu=float(mu),
        min_pair_count=rc.worst_count,
        min_ratio=rc.min_ratio,
        worst_pair=worst,
        cut=cut,
        edges=edges,
        mode=mode,
        paper_constants=paper_constants,
    )


EXHAUSTIVE_N_CAP = 14


def extract_robust_subgraph(
    adj: np.ndarray,
    alpha: float,
    beta: float,
    ell: int,
    mu: float | None = None,
    mode: str = "desk",
    budget: int | None = None,
) -> RobustCertificate:
    """Find U with |U| >= (2/3 + alpha/2) n, cut <= mu n^2, the edge-count
    lower bound, and (beta, ell)-robust G[U].

    Heuristic: delete one vertex of the most deficient pair's shared-
    neighborhood complement at a time; below the size floor, fall back to
    exhaustive subset search when n <= 14.  Raises ExtractionFailure naming
    the blocking clause; a returned certificate always re-verifies.
    """
    a = as_adjacency(adj)
    n = a.shape[0]
    if mu is None:
        mu = alpha / 4
    if mode not in ("desk", "asymptotic"):
        raise HypergraphError(f"mode must be desk or asymptotic, got {mode!r}")
    paper_constants = None
    if mode == "asymptotic":
        e = int(a.sum()) // 2
        if e < (5 / 9 + alpha) * n * n / 2:
            raise HypergraphError(
                f"asymptotic mode needs e(G) >= (5/9+alpha)n^2/2; "
                f"got e={e} at n={n}, alpha={alpha}"
            )
        # paper-exact constants recorded; the search still runs with the
        # supplied desk (beta, ell), which the certificate reports as its own
        paper_constants = robust_constants(alpha, mu).to_dict()
    size_floor = math.ceil((2 / 3 + alpha / 2) * n)
    u = np.ones(n, dtype=bool)
    deletions = 0
    max_deletions = n if budget is None else min(budget, n)
    last_failing = "size" if n < size_floor else None
    while int(u.sum()) >= size_floor and deletions <= max_deletions:
        failing, rc, _, _ = _clause_check(a, u, alpha, beta, ell, mu)
        if failing is None:
            return _certificate(a, u, alpha, beta, ell, mu, mode, paper_constants)
        last_failing = failing
        if failing != "robustness" or deletions == max_deletions:
            break  # shrinking U can only worsen cut/edge clauses
        labels = np.flatnonzero(u)
        x, y = rc.worst_pair
        sub = a[np.ix_(u, u)]
        shared = sub[x] & sub[y]
        # endpoints qualify too: an isolated endpoint (e.g. the anchor of a
        # link graph) can never gain shared neighbours by deleting others
        candidates = [i for i in range(len(labels)) if not shared[i]]
        degrees = sub.sum(axis=1)
        victim = min(candidates, key=lambda i: (degrees[i], labels[i]))
        u[labels[victim]] = False
        deletions += 1
    if n <= EXHAUSTIVE_N_CAP:
        import itertools

        for size in range(n, size_floor - 1, -1):
            for subset in itertools.combinations(range(n), size):
                mask = np.zeros(n, dtype=bool)
                mask[list(subset)] = True
                failing, _, _, _ = _clause_check(a, mask, alpha, beta, ell, mu)
                if failing is None:
                    return _certificate(
                        a, mask, alpha, beta, ell, mu, mode, paper_constants
                    )
        raise ExtractionFailure(
            f"exhaustive search over all subsets of size >= {size_floor} found "
            f"no certificate (last obstruction: {last_failing})",
            clause=last_failing or "robustness",
        )
    raise ExtractionFailure(
        f"greedy deletion reached the size floor {size_floor} without a "
        f"certificate (last obstruction: {last_failing})",
        clause=last_failing or "robustness",
    )


# ------------------------------------------------------------ pair-count lemma


def check_lemma_L36(
    adj_g: np.ndarray, adj_gp: np.ndarray, u_set: Iterable[int], alpha: float
) -> dict:
    """Dense-pair count report: ordered pairs (u, v) in U^2 with uv an edge of
    both graphs and v of induced degree > n/3 number at least (3/4) alpha n^2,
    whenever both graphs have >= (5/9+alpha)n^2/2 edges, |U| >= 2n/3, and the
    U-cut of the first graph is <= alpha n^2/4.
    """
    g = as_adjacency(adj_g)
    gp = as_adjacency(adj_gp)
    if g.shape != gp.shape:
        raise HypergraphError(
            f"graphs must share a vertex set, got n={g.shape[0]} and n={gp.shape[0]}"
        )
    n = g.shape[0]
    u_list = sorted(set(int(v) for v in u_set))
    if any(v < 0 or v >= n for v in u_list):
        raise HypergraphError("U contains a vertex outside the shared vertex set")
    mask = np.zeros(n, dtype=bool)
    mask[u_list] = True
    e_g = int(g.sum()) // 2
    e_gp = int(gp.sum()) // 2
    cut = int(g[np.ix_(mask, ~mask)].sum())
    hypotheses = {
        "edges_g": (e_g, (5 / 9 + alpha) * n * n / 2, e_g >= (5 / 9 + alpha) * n * n / 2),
        "edges_g_prime": (
            e_gp,
            (5 / 9 + alpha) * n * n / 2,
            e_gp >= (5 / 9 + alpha) * n * n / 2,
        ),
        "u_size": (len(u_list), 2 * n / 3, len(u_list) >= 2 * n / 3),
        "u_cut": (cut, alpha * n * n / 4, cut <= alpha * n * n / 4),
    }
    hold = all(v[2] for v in hypotheses.values())
    common = g[np.ix_(mask, mask)] & gp[np.ix_(mask, mask)]
    deg_r = g[np.ix_(mask, mask)].sum(axis=1)
    heavy = deg_r > n / 3  # columns v with large induced degree
    lhs = int(common[:, heavy].sum())
    rhs = 0.75 * alpha * n * n
    return {
        "lemma": "L36",
        "n": n,
        "alpha": alpha,
        "hypotheses": {k: list(v) for k, v in hypotheses.items()},
        "hypotheses_hold": hold,
        "lhs": lhs,
        "rhs": rhs,
        "relation": ">=",
        "margin": lhs - rhs,
        "pass": (lhs >= rhs) if hold else None,
    }
