"""Robust link families, connectable pairs/triples, bridges, and the exact
counting verifiers built on them.

For a 3-uniform host, every vertex v carries a certified robust subgraph R_v
of its link graph; a pair xy is zeta-connectable when xy lies in at least
zeta*n of the R_v.  For a 4-uniform host the same machinery runs one level
up: every pair {u,v} carries R_uv, each vertex link (a 3-uniform hypergraph
on n-1 vertices) inherits a pair family {R_uv : u != v}, and a triple is
zeta-connectable when it is a bridge in at least zeta*n of the vertex links.

Every verifier here evaluates both sides of its inequality exactly and only
asserts when the hypotheses certify; in desk mode unmet hypotheses downgrade
the verdict to None ("hypotheses unmet") instead of failing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .hypercore import Hypergraph, HypergraphError
from .robust import (
    ExtractionFailure,
    RobustCertificate,
    check_lemma_L36,
    extract_robust_subgraph,
)

__all__ = [
    "FamilyBuildError",
    "RobustFamily3",
    "RobustFamily4",
    "ConnectivityIndex3",
    "ConnectivityIndex4",
    "LinkContext",
    "Bridges4View",
    "VerifierReport",
    "edge_tensor",
    "pair_index",
    "build_family3",
    "build_family4",
    "connectable_pairs",
    "connectable_triples",
    "bridges3",
    "bridges3_mask",
    "bridges4",
    "link_context",
    "verify_counting_lemma",
    "VERIFIER_IDS",
]

TENSOR_N_CAP = 110  # n^4 bool tensors: keep allocations comfortably < 150 MB


class FamilyBuildError(RuntimeError):
    """Robust-subgraph extraction failed; `location` is the vertex or pair."""

    def __init__(self, message: str, location):
        super().__init__(message)
        self.location = location


def count_threshold(zeta: float, universe: int) -> int:
    """Smallest integer count satisfying count >= zeta * universe, with zeta
    read as its decimal literal so boundaries are exact."""
    z = Fraction(str(zeta)) if isinstance(zeta, float) else Fraction(zeta)
    if not (0 < z <= 1):
        raise HypergraphError(f"zeta must be in (0, 1], got {zeta}")
    return math.ceil(z * universe)


def pair_index(u: int, v: int, n: int) -> int:
    """Rank of the pair {u, v} (u < v) in lexicographic pair order."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def edge_tensor(h: Hypergraph) -> np.ndarray:
    """Dense order-k boolean incidence tensor, symmetric in all axes; cached
    on the hypergraph."""
    cached = h._ext_cache.get("edge_tensor")
    if cached is not None:
        return cached
    if h.n > TENSOR_N_CAP and h.k >= 4:
        raise HypergraphError(
            f"n={h.n} too large for dense k={h.k} tensor ops (cap {TENSOR_N_CAP})"
        )
    import itertools

    t = np.zeros((h.n,) * h.k, dtype=bool)
    arr = h.edge_array
    if len(arr):
        for perm in itertools.permutations(range(h.k)):
            t[tuple(arr[:, p] for p in perm)] = True
    h._ext_cache["edge_tensor"] = t
    return t


# ------------------------------------------------------------------ families


@dataclass(frozen=True)
class RobustFamily3:
    """One certified robust subgraph of every vertex link of a 3-uniform host.

    r_adj[v] is the adjacency matrix of R_v on the full vertex universe
    (zero outside the certified vertex set).
    """

    host: Hypergraph
    alpha: float
    beta: float
    ell: int
    mu: float
    certificates: dict[int, RobustCertificate]
    r_adj: np.ndarray  # (n, n, n) bool

    @property
    def n(self) -> int:
        return self.host.n

    def r_edges(self, v: int) -> np.ndarray:
        return self.r_adj[v]


@dataclass(frozen=True)
class RobustFamily4:
    """One certified robust subgraph of every pair link of a 4-uniform host.

    r_adj[pair_index(u, v, n)] is the adjacency matrix of R_uv.
    """

    host: Hypergraph
    alpha: float
    beta: float
    ell: int
    mu: float
    certificates: dict[tuple[int, int], RobustCertificate]
    r_adj: np.ndarray  # (n*(n-1)//2, n, n) bool

    @property
    def n(self) -> int:
        return self.host.n

    def r_edges(self, u: int, v: int) -> np.ndarray:
        return self.r_adj[pair_index(u, v, self.n)]


def _link_adjacency_stack3(h: Hypergraph) -> np.ndarray:
    """t[v] = adjacency matrix of the link graph of v (v isolated)."""
    t = np.zeros((h.n, h.n, h.n), dtype=bool)
    arr = h.edge_array
    if len(arr):
        a, b, c = arr[:, 0], arr[:, 1], arr[:, 2]
        for anchor, x, y in ((a, b, c), (b, a, c), (c, a, b)):
            t[anchor, x, y] = True
            t[anchor, y, x] = True
    return t


def _pair_link_stack4(h: Hypergraph) -> np.ndarray:
    """p[pair_index(u,v)] = adjacency matrix of the pair link H_uv."""
    n = h.n
    p = np.zeros((n * (n - 1) // 2, n, n), dtype=bool)
    arr = h.edge_array.astype(np.int64)
    if len(arr):
        import itertools

        for i, j in itertools.combinations(range(4), 2):
            k, l = [s for s in range(4) if s not in (i, j)]
            rows = arr[:, i] * (2 * n - arr[:, i] - 1) // 2 + (arr[:, j] - arr[:, i] - 1)
            p[rows, arr[:, k], arr[:, l]] = True
            p[rows, arr[:, l], arr[:, k]] = True
    return p


def build_family3(
    h3: Hypergraph,
    alpha: float,
    beta: float,
    ell: int,
    mu: float | None = None,
    mode: str = "desk",
) -> RobustFamily3:
    """Extract a certified R_v from every vertex link; fails at the first
    vertex whose link admits no certificate."""
    if h3.k != 3:
        raise HypergraphError(f"need a 3-uniform host, got k={h3.k}")
    if mu is None:
        mu = alpha**3 / 18
    links = _link_adjacency_stack3(h3)
    n = h3.n
    certificates: dict[int, RobustCertificate] = {}
    r_adj = np.zeros((n, n, n), dtype=bool)
    for v in range(n):
        try:
            cert = extract_robust_subgraph(links[v], alpha, beta, ell, mu, mode)
        except (ExtractionFailure, HypergraphError) as exc:
            raise FamilyBuildError(
                f"no robust subgraph in the link of vertex {v}: {exc}", location=v
            ) from exc
        certificates[v] = cert
        idx = np.array(cert.vertices, dtype=np.int64)
        r_adj[v][np.ix_(idx, idx)] = links[v][np.ix_(idx, idx)]
    return RobustFamily3(h3, float(alpha), float(beta), int(ell), float(mu),
                         certificates, r_adj)


def build_family4(
    h4: Hypergraph,
    alpha: float,
    beta: float,
    ell: int,
    mu: float | None = None,
    mode: str = "desk",
) -> RobustFamily4:
    """Extract a certified R_uv from every pair link; fails at the first pair
    whose link admits no certificate."""
    if h4.k != 4:
        raise HypergraphError(f"need a 4-uniform host, got k={h4.k}")
    if mu is None:
        mu = alpha**3 / 18
    links = _pair_link_stack4(h4)
    n = h4.n
    certificates: dict[tuple[int, int], RobustCertificate] = {}
    r_adj = np.zeros_like(links)
    for u in range(n):
        for v in range(u + 1, n):
            pi = pair_index(u, v, n)
            try:
                cert = extract_robust_subgraph(links[pi], alpha, beta, ell, mu, mode)
            except (ExtractionFailure, HypergraphError) as exc:
                raise FamilyBuildError(
                    f"no robust subgraph in the link of pair {{{u}, {v}}}: {exc}",
                    location=(u, v),
                ) from exc
            certificates[(u, v)] = cert
            idx = np.array(cert.vertices, dtype=np.int64)
            r_adj[pi][np.ix_(idx, idx)] = links[pi][np.ix_(idx, idx)]
    return RobustFamily4(h4, float(alpha), float(beta), int(ell), float(mu),
                         certificates, r_adj)


# ------------------------------------------------------------------- indexes


@dataclass
class ConnectivityIndex3:
    """Witness counts |U_xy| = #{v : xy in E(R_v)} and the connectable mask."""

    family: RobustFamily3 | None
    zeta: float
    universe: int  # |V| in the threshold |U_xy| >= zeta |V|
    counts: np.ndarray  # (n, n) int32
    conn: np.ndarray  # (n, n) bool
    threshold: int
    _witness_cache: dict = field(default_factory=dict, repr=False)

    def is_connectable(self, x: int, y: int) -> bool:
        return bool(self.conn[x, y])

    def witnesses(self, x: int, y: int) -> np.ndarray:
        """U_xy as a sorted vertex array (cached)."""
        key = (min(x, y), max(x, y))
        got = self._witness_cache.get(key)
        if got is None:
            if self.family is None:
                raise HypergraphError("index has no family to enumerate witnesses")
            got = np.flatnonzero(self.family.r_adj[:, x, y])
            self._witness_cache[key] = got
        return got


def connectable_pairs(
    family3: RobustFamily3, zeta: float, universe: int | None = None
) -> ConnectivityIndex3:
    """Exact witness counts for all pairs; `universe` overrides |V| in the
    threshold (used for vertex links, whose universe is one smaller)."""
    n = family3.n
    uni = n if universe is None else universe
    thr = count_threshold(zeta, uni)
    counts = family3.r_adj.sum(axis=0, dtype=np.int32)
    conn = counts >= thr
    return ConnectivityIndex3(family3, float(zeta), uni, counts, conn, thr)


@dataclass
class ConnectivityIndex4:
    """Per-link connectable-pair masks and witness counts |U_xyz| for ordered
    triples of a 4-uniform host."""

    family: RobustFamily4
    zeta: float
    counts: np.ndarray  # (n, n, n) small-int: |U_xyz|
    conn: np.ndarray  # (n, n, n) bool: counts >= ceil(zeta * n)
    threshold: int
    link_pair_counts: np.ndarray  # (n, n, n) int16: [v, x, y] = |U^v_xy|
    link_conn: np.ndarray  # (n, n, n) bool: pair xy connectable in the link of v
    link_threshold: int  # ceil(zeta * (n - 1))
    _witness_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.family.n

    def is_connectable(self, x: int, y: int, z: int) -> bool:
        return bool(self.conn[x, y, z])

    def witnesses(self, x: int, y: int, z: int) -> np.ndarray:
        """U_xyz as a sorted vertex array (cached)."""
        key = (x, y, z)
        got = self._witness_cache.get(key)
        if got is None:
            e4 = edge_tensor(self.family.host)
            mask = (
                e4[:, x, y, z]
                & self.link_conn[:, x, y]
                & self.link_conn[:, y, z]
            )
            got = np.flatnonzero(mask)
            self._witness_cache[key] = got
        return got


def connectable_triples(family4: RobustFamily4, zeta: float) -> ConnectivityIndex4:
    """Materialize every vertex link's connectable-pair mask, then count for
    each ordered triple the links in which it is a bridge."""
    n = family4.n
    host = family4.host
    e4 = edge_tensor(host)
    link_thr = count_threshold(zeta, n - 1)
    thr = count_threshold(zeta, n)
    link_pair_counts = np.zeros((n, n, n), dtype=np.int16)
    for u in range(n):
        for v in range(u + 1, n):
            r = family4.r_adj[pair_index(u, v, n)]
            link_pair_counts[u] += r
            link_pair_counts[v] += r
    link_conn = link_pair_counts >= link_thr
    count_dtype = np.uint8 if n < 256 else np.uint16
    counts = np.zeros((n, n, n), dtype=count_dtype)
    for v in range(n):
        bridge_v = (
            e4[v]
            & link_conn[v][:, :, None]
            & link_conn[v][None, :, :]
        )
        counts += bridge_v
    conn = counts >= thr
    return ConnectivityIndex4(
        family4, float(zeta), counts, conn, thr,
        link_pair_counts, link_conn, link_thr,
    )


@dataclass
class LinkContext:
    """A vertex link of a 4-uniform host presented as 3-uniform machinery:
    edge tensor, connectable-pair mask, and witness lookup, on the original
    labels with the anchor isolated."""

    anchor: int
    e3: np.ndarray  # (n, n, n) bool view: edges of the link of `anchor`
    conn: np.ndarray  # (n, n) bool
    counts: np.ndarray  # (n, n) int16
    universe: int  # n - 1
    family4: RobustFamily4

    def witnesses(self, x: int, y: int) -> np.ndarray:
        """{u != anchor : xy in E(R_{u, anchor})} as a sorted array."""
        n = self.family4.n
        v = self.anchor
        rows = np.array(
            [pair_index(u, v, n) for u in range(n) if u != v], dtype=np.int64
        )
        labels = np.array([u for u in range(n) if u != v], dtype=np.int64)
        hits = self.family4.r_adj[rows, x, y]
        return labels[hits]


def link_context(index4: ConnectivityIndex4, v: int) -> LinkContext:
    e4 = edge_tensor(index4.family.host)
    return LinkContext(
        anchor=v,
        e3=e4[v],
        conn=index4.link_conn[v],
        counts=index4.link_pair_counts[v],
        universe=index4.n - 1,
        family4=index4.family,
    )


# ------------------------------------------------------------------- bridges


def bridges3_mask(family3: RobustFamily3, index3: ConnectivityIndex3) -> np.ndarray:
    """(n,n,n) bool: ordered triples (x,y,z) with xyz an edge and both xy, yz
    connectable."""
    e3 = edge_tensor(family3.host)
    return e3 & index3.conn[:, :, None] & index3.conn[None, :, :]


def bridges3(
    family3: RobustFamily3, zeta: float, index3: ConnectivityIndex3 | None = None
) -> frozenset:
    if index3 is None:
        index3 = connectable_pairs(family3, zeta)
    mask = bridges3_mask(family3, index3)
    return frozenset(tuple(int(v) for v in t) for t in np.argwhere(mask))


class Bridges4View:
    """Set-like view over the ordered zeta-bridge quadruples of a 4-uniform
    host, backed by a dense boolean mask."""

    def __init__(self, mask: np.ndarray):
        self.mask = mask
        self._count = int(mask.sum())

    def __contains__(self, quad) -> bool:
        a, b, c, d = quad
        return bool(self.mask[a, b, c, d])

    def __len__(self) -> int:
        return self._count

    def __iter__(self):
        for t in np.argwhere(self.mask):
            yield tuple(int(v) for v in t)


def bridges4(
    family4: RobustFamily4, zeta: float, index4: ConnectivityIndex4 | None = None
) -> Bridges4View:
    """Ordered quadruples (a,b,c,d) with abcd an edge and (a,b,c), (b,c,d)
    both zeta-connectable triples."""
    if index4 is None:
        index4 = connectable_triples(family4, zeta)
    e4 = edge_tensor(family4.host)
    mask = e4 & index4.conn[:, :, :, None] & index4.conn[None, :, :, :]
    return Bridges4View(mask)


# ----------------------------------------------------------------- verifiers

VERIFIER_IDS = ("F41", "NB3", "L35", "F41analog", "NCT", "NB4", "L36")


@dataclass
class VerifierReport:
    lemma: str
    mode: str
    n: int
    lhs: float
    rhs: float
    relation: str  # "<=" or ">="
    hypotheses: dict  # name -> [value, bound, ok]
    hypotheses_hold: bool
    pass_: bool | None  # None = hypotheses unmet (desk mode)
    alpha: float | None = None
    zeta: float | None = None
    mu_assumed: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs if self.relation == "<=" else self.lhs - self.rhs

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "mode": self.mode,
            "n": self.n,
            "hypotheses": {k: list(v) for k, v in self.hypotheses.items()},
            "hypotheses_hold": self.hypotheses_hold,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "margin": self.margin,
            "pass": self.pass_,
            "alpha": self.alpha,
            "zeta": self.zeta,
            "mu_assumed": self.mu_assumed,
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _finish(lemma, mode, n, lhs, rhs, relation, hyps, alpha, zeta, mu, extra=None):
    hold = all(bool(v[2]) for v in hyps.values())
    if mode == "asymptotic" and not hold:
        failed = [k for k, v in hyps.items() if not v[2]]
        raise HypergraphError(
            f"{lemma}: hypotheses not satisfied in strict mode: {', '.join(failed)}"
        )
    ok = (lhs <= rhs) if relation == "<=" else (lhs >= rhs)
    return VerifierReport(
        lemma=lemma,
        mode=mode,
        n=n,
        lhs=float(lhs),
        rhs=float(rhs),
        relation=relation,
        hypotheses=hyps,
        hypotheses_hold=hold,
        pass_=ok if hold else None,
        alpha=alpha,
        zeta=zeta,
        mu_assumed=mu,
        extra=extra or {},
    )


def _min_vertex_degree(h: Hypergraph, vertices=None) -> int:
    arr = h.edge_array
    n = h.n
    counts = np.zeros(n, dtype=np.int64)
    if len(arr):
        for j in range(h.k):
            np.add.at(counts, arr[:, j].astype(np.int64), 1)
    if vertices is None:
        return int(counts.min()) if n else 0
    vs = list(vertices)
    return int(counts[vs].min()) if vs else 0


def _get(instance: dict, key: str, lemma: str):
    if key not in instance:
        raise HypergraphError(f"{lemma}: instance needs {key!r}")
    return instance[key]


def _verify_f41(instance, mode):
    fam: RobustFamily3 = _get(instance, "family3", "F41")
    zeta = _get(instance, "zeta", "F41")
    idx = instance.get("index3") or connectable_pairs(fam, zeta)
    n = fam.n
    lhs = int((fam.r_adj & ~idx.conn[None, :, :]).sum())
    rhs = zeta * n**3
    # holds by definition of the witness sets, independent of the setup
    return _finish("F41", mode, n, lhs, rhs, "<=", {}, fam.alpha, zeta, fam.mu)


def _verify_nb3(instance, mode):
    fam: RobustFamily3 = _get(instance, "family3", "NB3")
    zeta = _get(instance, "zeta", "NB3")
    alpha = instance.get("alpha", fam.alpha)
    idx = instance.get("index3") or connectable_pairs(fam, zeta)
    n = fam.n
    e3 = edge_tensor(fam.host)
    bridge = bridges3_mask(fam, idx)
    ordered_edges = int(e3.sum())
    n_bridges = int(bridge.sum())
    lhs = ordered_edges - n_bridges
    rhs = (2 / 9 + alpha / 2 + 2 * zeta) * n**3
    min_deg = _min_vertex_degree(fam.host)
    hyps = {
        "min_vertex_degree": (
            min_deg, (5 / 9 + alpha) * n**2 / 2,
            min_deg >= (5 / 9 + alpha) * n**2 / 2,
        ),
        "alpha_range": (alpha, 1 / 3, 0 < alpha < 1 / 3),
        "family_mu": (fam.mu, alpha / 4, fam.mu <= alpha / 4),
    }
    second_applicable = zeta < alpha / 4
    extra = {
        "bridges": n_bridges,
        "second_rhs": n**3 / 3,
        "second_relation": ">",
        "zeta_below_alpha_quarter": second_applicable,
        "second_pass": (
            (n_bridges > n**3 / 3)
            if (second_applicable and all(v[2] for v in hyps.values()))
            else None
        ),
    }
    return _finish("NB3", mode, n, lhs, rhs, "<=", hyps, alpha, zeta, fam.mu, extra)


def _verify_l35(instance, mode):
    fam: RobustFamily3 = _get(instance, "family3", "L35")
    h_prime: Hypergraph = _get(instance, "h_prime", "L35")
    zeta = _get(instance, "zeta", "L35")
    alpha = instance.get("alpha", fam.alpha)
    n = fam.n
    if h_prime.k != 3 or h_prime.n != n:
        raise HypergraphError(
            f"L35: h_prime must be 3-uniform on the same {n} labels"
        )
    v_prime = instance.get("v_prime")
    v_prime = set(range(n)) if v_prime is None else set(int(v) for v in v_prime)
    idx = instance.get("index3") or connectable_pairs(fam, zeta)
    bridge = bridges3_mask(fam, idx)
    e3p = edge_tensor(h_prime)
    lhs = int((bridge & e3p).sum())
    rhs = alpha * n**3 / 2
    sym_diff = n - len(v_prime & set(range(n))) + len(v_prime - set(range(n)))
    min_deg = _min_vertex_degree(fam.host)
    min_deg_p = _min_vertex_degree(h_prime, sorted(v_prime)) if v_prime else 0
    mu_needed = alpha**3 / 18
    hyps = {
        "family_mu": (fam.mu, mu_needed, fam.mu <= mu_needed + 1e-12),
        "zeta_range": (zeta, alpha**2 / 9, 0 < zeta < alpha**2 / 9),
        "min_vertex_degree": (
            min_deg, (5 / 9 + alpha) * n**2 / 2,
            min_deg >= (5 / 9 + alpha) * n**2 / 2,
        ),
        "min_vertex_degree_prime": (
            min_deg_p, (5 / 9 + alpha) * n**2 / 2,
            min_deg_p >= (5 / 9 + alpha) * n**2 / 2,
        ),
        "symmetric_difference": (sym_diff, alpha * n / 18, sym_diff <= alpha * n / 18),
    }
    return _finish("L35", mode, n, lhs, rhs, ">=", hyps, alpha, zeta, fam.mu)


def _verify_f41analog(instance, mode):
    fam: RobustFamily4 = _get(instance, "family4", "F41analog")
    zeta = _get(instance, "zeta", "F41analog")
    idx = instance.get("index4") or connectable_triples(fam, zeta)
    n = fam.n
    e4 = edge_tensor(fam.host)
    not_conn = ~idx.conn
    lhs = 0
    for d in range(n):
        bridge_d = e4[d] & idx.link_conn[d][:, :, None] & idx.link_conn[d][None, :, :]
        lhs += int((bridge_d & not_conn).sum())
    rhs = zeta * n**4
    # unconditional: a non-connectable triple is a bridge in < zeta*n links
    return _finish("F41analog", mode, n, lhs, rhs, "<=", {}, fam.alpha, zeta, fam.mu)


def _min_pair_degree(h: Hypergraph) -> int:
    cnt, _ = h.min_j_degree(2)
    return cnt


def _verify_nct(instance, mode):
    fam: RobustFamily4 = _get(instance, "family4", "NCT")
    zeta = _get(instance, "zeta", "NCT")
    alpha = instance.get("alpha", fam.alpha)
    idx = instance.get("index4") or connectable_triples(fam, zeta)
    n = fam.n
    lhs = int(idx.conn.sum())
    rhs = (1 / 3 - 2 * zeta) * n**3
    min_deg2 = _min_pair_degree(fam.host)
    mu_needed = alpha**3 / 18
    hyps = {
        "min_pair_degree": (
            min_deg2, (5 / 9 + alpha) * n**2 / 2,
            min_deg2 >= (5 / 9 + alpha) * n**2 / 2,
        ),
        "alpha_range": (alpha, 1 / 3, 0 < alpha < 1 / 3),
        "zeta_range": (zeta, alpha / 4, 0 < zeta < alpha / 4),
        "family_mu": (fam.mu, mu_needed, fam.mu <= mu_needed + 1e-12),
        "n_large": (n, 1 / zeta, n >= 1 / zeta),
    }
    return _finish("NCT", mode, n, lhs, rhs, ">=", hyps, alpha, zeta, fam.mu)


def _verify_nb4(instance, mode):
    fam: RobustFamily4 = _get(instance, "family4", "NB4")
    zeta = _get(instance, "zeta", "NB4")
    alpha = instance.get("alpha", fam.alpha)
    idx = instance.get("index4") or connectable_triples(fam, zeta)
    n = fam.n
    view = bridges4(fam, zeta, idx)
    lhs = len(view)
    rhs = (1 / 9 - 7 * zeta) * n**4
    min_deg2 = _min_pair_degree(fam.host)
    mu_needed = alpha**3 / 18
    hyps = {
        "min_pair_degree": (
            min_deg2, (5 / 9 + alpha) * n**2 / 2,
            min_deg2 >= (5 / 9 + alpha) * n**2 / 2,
        ),
        "alpha_range": (alpha, 1 / 3, 0 < alpha < 1 / 3),
        "family_mu": (fam.mu, mu_needed, fam.mu <= mu_needed + 1e-12),
        "n_large": (n, (5 / 9 + alpha) / zeta, n >= (5 / 9 + alpha) / zeta),
    }
    return _finish("NB4", mode, n, lhs, rhs, ">=", hyps, alpha, zeta, fam.mu)


def _verify_l36(instance, mode):
    g = _get(instance, "g", "L36")
    gp = _get(instance, "g_prime", "L36")
    u = _get(instance, "u", "L36")
    alpha = _get(instance, "alpha", "L36")
    rep = check_lemma_L36(g, gp, u, alpha)
    hyps = {k: tuple(v) for k, v in rep["hypotheses"].items()}
    return _finish(
        "L36", mode, rep["n"], rep["lhs"], rep["rhs"], ">=", hyps, alpha, None, None
    )


_DISPATCH = {
    "F41": _verify_f41,
    "NB3": _verify_nb3,
    "L35": _verify_l35,
    "F41analog": _verify_f41analog,
    "NCT": _verify_nct,
    "NB4": _verify_nb4,
    "L36": _verify_l36,
}


def verify_counting_lemma(lemma_id: str, instance: dict, mode: str = "desk") -> VerifierReport:
    """Evaluate both sides of the named counting inequality exactly.

    In desk mode unmet hypotheses give pass_=None; in asymptotic mode they
    raise.  Unknown ids are invalid arguments.
    """
    if mode not in ("desk", "asymptotic"):
        raise HypergraphError(f"mode must be desk or asymptotic, got {mode!r}")
    fn = _DISPATCH.get(lemma_id)
    if fn is None:
        raise HypergraphError(
            f"unknown lemma id {lemma_id!r}; expected one of {', '.join(VERIFIER_IDS)}"
        )
    return fn(instance, mode)
