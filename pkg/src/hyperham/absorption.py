"""Absorber discovery and the absorbing-path machinery for 4-uniform hosts.

An absorber is 35 vertices arranged as five 7-vertex tight paths with
connectable end triples: four "swap" paths b1 b2 b3 x b4 b5 b6 whose outer
sextuple lives in the link of x (and of a designated target vertex, when one
is fixed), plus one "parking" path u1..u4 w1 w2 w3 that can take the four
x's into its middle.  Embedding the five paths as segments of a longer path
lets four outside vertices replace the x's while the x's slide into the
parking path — growing the path's vertex set by exactly four without moving
its ends.

Discovery follows the abundance arguments: swap sextuples come from
complete 3-partite 2,2,2 patterns in the tensor of connectable joint-link
triples, parking tuples from complete 4-partite 3,3,3,2 patterns in the
tensor of connectable-bridge quadruples, each with a plain DFS fallback.
Desk-scale absorbers are found generically (no target vertices fixed);
`absorb` re-checks swap feasibility against the actual vertices at
absorption time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .connectivity import ConnectivityIndex4, RobustFamily4, connectable_triples, edge_tensor
from .connector import connect4_ex, residue_lengths
from .hypercore import Hypergraph, HypergraphError
from .tightpaths import TightPath, end_triples, validate

__all__ = [
    "Absorber",
    "AbsorbConfig",
    "AbsorbingPath",
    "AbsorbError",
    "BuildAbsorbingError",
    "joint_link_paths",
    "find_elves",
    "find_absorber",
    "find_absorber_ex",
    "build_absorbing_path",
    "absorb",
]


class AbsorbError(RuntimeError):
    """The absorb transformation could not be applied."""


class BuildAbsorbingError(RuntimeError):
    """Absorbing-path construction failed at a named stage."""

    def __init__(self, stage: str, diagnostics: dict):
        super().__init__(f"absorbing-path construction failed at stage {stage!r}")
        self.stage = stage
        self.diagnostics = diagnostics


# ----------------------------------------------------------------- absorber


@dataclass(frozen=True)
class Absorber:
    """Five 7-vertex paths on 35 distinct vertices; see the module docstring.

    `a_vec` records fixed target vertices when the swap sextuples were
    required to live in their links as well; None means generic discovery
    with feasibility deferred to absorption time.
    """

    b_vecs: tuple  # four sextuples
    u_vec: tuple
    x_vec: tuple
    w_vec: tuple
    a_vec: tuple | None = None

    @property
    def vertices(self) -> tuple:
        out = []
        for b in self.b_vecs:
            out.extend(b)
        out.extend(self.u_vec)
        out.extend(self.x_vec)
        out.extend(self.w_vec)
        return tuple(out)

    @property
    def five_paths(self) -> tuple:
        """The segment sequences embedded into the absorbing path."""
        paths = []
        for i, b in enumerate(self.b_vecs):
            paths.append(b[:3] + (self.x_vec[i],) + b[3:])
        paths.append(self.u_vec + self.w_vec)
        return tuple(paths)

    @property
    def long_parking_path(self) -> tuple:
        return self.u_vec + self.x_vec + self.w_vec

    def post_absorption_paths(self, z_vec) -> tuple:
        """The five sequences after absorbing z1..z4 (zi replaces xi)."""
        z_vec = tuple(int(z) for z in z_vec)
        paths = []
        for i, b in enumerate(self.b_vecs):
            paths.append(b[:3] + (z_vec[i],) + b[3:])
        paths.append(self.long_parking_path)
        return tuple(paths)

    def swap_feasible(self, e4: np.ndarray, z: int, i: int) -> bool:
        """Can z stand in for the target of swap path i: the sextuple's four
        consecutive triples must all lie in the link of z."""
        b = self.b_vecs[i]
        return bool(
            e4[z, b[0], b[1], b[2]]
            and e4[z, b[1], b[2], b[3]]
            and e4[z, b[2], b[3], b[4]]
            and e4[z, b[3], b[4], b[5]]
        )

    def verify(self, h4: Hypergraph, index4: ConnectivityIndex4) -> list:
        """All invariants; returns a list of violations (empty = good)."""
        problems = []
        vs = self.vertices
        if len(vs) != 35 or len(set(vs)) != 35:
            problems.append(f"expected 35 distinct vertices, got {len(set(vs))}")
        if self.a_vec is not None and set(self.a_vec) & set(vs):
            problems.append("target vertices overlap the absorber")
        if len(self.b_vecs) != 4:
            problems.append(f"expected 4 swap sextuples, got {len(self.b_vecs)}")
        for i, path in enumerate(self.five_paths):
            cert = validate(list(path), h4, kind="path")
            if not cert.ok:
                problems.append(f"path {i} invalid: {cert}")
            first, last = path[:3], path[-3:]
            if not index4.conn[first]:
                problems.append(f"path {i} start triple {first} not connectable")
            if not index4.conn[last]:
                problems.append(f"path {i} end triple {last} not connectable")
        cert = validate(list(self.long_parking_path), h4, kind="path")
        if not cert.ok:
            problems.append(f"long parking path invalid: {cert}")
        if self.a_vec is not None:
            swapped = self.post_absorption_paths(self.a_vec)
            for i in range(4):
                cert = validate(list(swapped[i]), h4, kind="path")
                if not cert.ok:
                    problems.append(f"swap path {i} with target invalid: {cert}")
        # partition identity: the five paths tile the 35 vertices exactly
        tiled: list = []
        for path in self.five_paths:
            tiled.extend(path)
        if sorted(tiled) != sorted(vs):
            problems.append("five paths do not partition the vertex set")
        return problems


# --------------------------------------------------------- pattern searches


def _free_mask(n: int, forbidden) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    for v in forbidden:
        v = int(v)
        if 0 <= v < n:
            mask[v] = False
    return mask


def _pick(mask: np.ndarray, priority: np.ndarray, skip=()) -> int:
    cand = np.flatnonzero(mask)
    if skip:
        cand = cand[~np.isin(cand, list(skip))]
    if len(cand) == 0:
        return -1
    return int(cand[np.argmin(priority[cand])])


def joint_link_paths(
    h4: Hypergraph,
    a: int | None,
    x: int,
    index4: ConnectivityIndex4 | None = None,
    zeta: float | None = None,
    limit: int = 6,
    forbidden=(),
    *,
    family4: RobustFamily4 | None = None,
    seed: int = 0,
    budget: int = 20_000,
) -> list:
    """Sextuples (b1..b6) forming a tight 3-uniform path in the link of x
    (intersected with the link of a when a is given) whose end triples
    (b1,b2,b3) and (b4,b5,b6) are connectable in the 4-uniform host.

    Search: grow a complete 3-partite 2,2,2 pattern inside the tensor of
    connectable joint-link triples; its six vertices read off as
    p1 q1 r1 p2 q2 r2.  Falls back to a slot-by-slot DFS.
    """
    n = h4.n
    if a is not None and int(a) == int(x):
        raise HypergraphError("the two link vertices must differ")
    if index4 is None:
        if family4 is None:
            raise HypergraphError("need a connectivity index or a robust family")
        index4 = connectable_triples(family4, zeta if zeta is not None else 0.1)
    e4 = edge_tensor(h4)
    jl = e4[int(x)].copy()
    if a is not None:
        jl &= e4[int(a)]
    b3 = jl & index4.conn
    free = _free_mask(n, forbidden)
    free[int(x)] = False
    if a is not None:
        free[int(a)] = False

    rng = np.random.default_rng(seed)
    priority = rng.permutation(n)
    out: list = []
    seen: set = set()
    spent = 0

    while len(out) < limit and spent < budget:
        spent += 1
        p1, q1, r1 = (int(v) for v in rng.integers(0, n, 3))
        if len({p1, q1, r1}) != 3 or not (free[p1] and free[q1] and free[r1]):
            continue
        if not b3[p1, q1, r1]:
            continue
        chosen = {p1, q1, r1}
        p2 = _pick(b3[:, q1, r1] & free, priority, chosen)
        if p2 < 0:
            continue
        chosen.add(p2)
        q2 = _pick(b3[p1, :, r1] & b3[p2, :, r1] & free, priority, chosen)
        if q2 < 0:
            continue
        chosen.add(q2)
        r2 = _pick(
            b3[p1, q1] & b3[p1, q2] & b3[p2, q1] & b3[p2, q2] & free,
            priority,
            chosen,
        )
        if r2 < 0:
            continue
        sextuple = (p1, q1, r1, p2, q2, r2)
        if sextuple not in seen:
            seen.add(sextuple)
            out.append(sextuple)

    if len(out) < limit:
        out.extend(
            _joint_link_dfs(b3, jl, free, priority, limit - len(out), seen,
                            budget=max(1, budget - spent))
        )
    return out[:limit]


def _joint_link_dfs(b3, jl, free, priority, want, seen, budget):
    """Slot DFS for b1..b6: four consecutive joint-link windows, connectable
    start (with window 1) at slot 3 and connectable end (with window 4) at
    slot 6."""
    found: list = []
    spent = 0
    slots = [None] * 6

    def order_of(mask):
        cand = np.flatnonzero(mask)
        return cand[np.argsort(priority[cand], kind="stable")]

    def mask_for(depth):
        s = slots
        if depth <= 1:
            return free
        if depth == 2:
            return b3[s[0], s[1]] & free
        if depth == 3:
            return jl[s[1], s[2]] & free
        if depth == 4:
            return jl[s[2], s[3]] & free
        return b3[s[3], s[4]] & free

    def dfs(depth):
        nonlocal spent
        if spent >= budget or len(found) >= want:
            return
        if depth == 6:
            tup = tuple(slots)
            if tup not in seen:
                seen.add(tup)
                found.append(tup)
            return
        spent += 1
        for v in order_of(mask_for(depth)):
            v = int(v)
            if v in slots[:depth]:
                continue
            slots[depth] = v
            dfs(depth + 1)
            slots[depth] = None
            if spent >= budget or len(found) >= want:
                return

    dfs(0)
    return found


def find_elves(
    h4: Hypergraph,
    family4: RobustFamily4,
    zeta: float | None = None,
    limit: int = 4,
    forbidden=(),
    index4: ConnectivityIndex4 | None = None,
    seed: int = 0,
    budget: int = 40_000,
) -> list:
    """11-tuples (u1..u4, x1..x4, w1,w2,w3) such that both the full sequence
    and the one with the x's removed are tight paths, with (u1,u2,u3) and
    (w1,w2,w3) connectable.

    Search: grow a complete 4-partite 3,3,3,2 pattern in the tensor of
    connectable-bridge quadruples; classes list as (u_i, x_i, w_i) columns
    with the fourth class contributing (u4, x4).  DFS fallback.
    """
    n = h4.n
    if index4 is None:
        index4 = connectable_triples(family4, zeta if zeta is not None else 0.1)
    e4 = edge_tensor(h4)
    conn = index4.conn
    bridge = e4 & conn[:, :, :, None] & conn[None, :, :, :]
    free = _free_mask(n, forbidden)

    rng = np.random.default_rng(seed)
    priority = rng.permutation(n)
    out: list = []
    seen: set = set()
    spent = 0

    while len(out) < limit and spent < budget:
        spent += 1
        c1, c2, c3, c4 = (int(v) for v in rng.integers(0, n, 4))
        if len({c1, c2, c3, c4}) != 4:
            continue
        if not (free[c1] and free[c2] and free[c3] and free[c4]):
            continue
        if not bridge[c1, c2, c3, c4]:
            continue
        chosen = {c1, c2, c3, c4}
        cls1, cls2, cls3, cls4 = [c1], [c2], [c3], [c4]

        # grow class 4 to two vertices first (cheapest constraints)
        m = free.copy()
        for i_, j_, k_ in itertools.product(cls1, cls2, cls3):
            m &= bridge[i_, j_, k_]
        extra4 = _pick(m, priority, chosen)
        if extra4 < 0:
            continue
        cls4.append(extra4)
        chosen.add(extra4)

        ok = True
        for axis, cls, need in ((0, cls1, 2), (1, cls2, 2), (2, cls3, 2)):
            for _ in range(need):
                m = free.copy()
                pools = (cls1, cls2, cls3, cls4)
                combos = itertools.product(
                    *[pools[t] if t != axis else [None] for t in range(4)]
                )
                for i_, j_, k_, l_ in combos:
                    idx = [i_, j_, k_, l_]
                    idx[axis] = slice(None)
                    m &= bridge[tuple(idx)]
                pick = _pick(m, priority, chosen)
                if pick < 0:
                    ok = False
                    break
                cls.append(pick)
                chosen.add(pick)
            if not ok:
                break
        if not ok:
            continue

        tup = (cls1[0], cls2[0], cls3[0], cls4[0],
               cls1[1], cls2[1], cls3[1], cls4[1],
               cls1[2], cls2[2], cls3[2])
        if tup not in seen:
            seen.add(tup)
            out.append(tup)

    if len(out) < limit:
        out.extend(
            _elf_dfs(e4, conn, free, priority, limit - len(out), seen,
                     budget=max(1, budget - spent))
        )
    return out[:limit]


def _elf_dfs(e4, conn, free, priority, want, seen, budget):
    """Direct 11-slot DFS: long-path windows, short-path windows, and the
    two connectable end triples."""
    n = len(free)
    found: list = []
    spent = 0

    def order_of(mask):
        cand = np.flatnonzero(mask)
        return cand[np.argsort(priority[cand], kind="stable")]

    slots = [None] * 11  # u1 u2 u3 u4 x1 x2 x3 x4 w1 w2 w3

    def mask_for(depth):
        s = slots
        if depth == 0:
            return free
        if depth == 1:
            return free
        if depth == 2:
            return conn[s[0], s[1]] & free
        if depth == 3:
            return e4[s[0], s[1], s[2]] & free
        if depth == 4:
            return e4[s[1], s[2], s[3]] & free
        if depth == 5:
            return e4[s[2], s[3], s[4]] & free
        if depth == 6:
            return e4[s[3], s[4], s[5]] & free
        if depth == 7:
            return e4[s[4], s[5], s[6]] & free
        if depth == 8:  # w1: long window and short window
            return e4[s[5], s[6], s[7]] & e4[s[1], s[2], s[3]] & free
        if depth == 9:  # w2
            return e4[s[6], s[7], s[8]] & e4[s[2], s[3], s[8]] & free
        # w3: two last windows plus the connectable end triple
        return (e4[s[7], s[8], s[9]] & e4[s[3], s[8], s[9]]
                & conn[s[8], s[9]] & free)

    def dfs(depth):
        nonlocal spent
        if spent >= budget or len(found) >= want:
            return
        if depth == 11:
            tup = tuple(slots)
            if tup not in seen:
                seen.add(tup)
                found.append(tup)
            return
        spent += 1
        for v in order_of(mask_for(depth)):
            v = int(v)
            if v in slots[:depth]:
                continue
            slots[depth] = v
            dfs(depth + 1)
            slots[depth] = None
            if spent >= budget or len(found) >= want:
                return

    dfs(0)
    return found


# ------------------------------------------------------- absorber assembly


def find_absorber_ex(
    h4: Hypergraph,
    family4: RobustFamily4,
    index4: ConnectivityIndex4,
    a_vec=None,
    zeta: float | None = None,
    forbidden=(),
    budget: int = 60_000,
    seed: int = 0,
):
    """find_absorber plus stage diagnostics.

    One parking 11-tuple, then four swap sextuples against its x's with
    cumulative disjointness.  With a_vec given (4 entries, repeats legal)
    each sextuple is additionally confined to the matching target's link.
    """
    if a_vec is not None:
        a_vec = tuple(int(v) for v in a_vec)
        if len(a_vec) != 4:
            raise HypergraphError(f"a_vec needs 4 entries, got {len(a_vec)}")
    base_forbid = set(int(v) for v in forbidden)
    if a_vec:
        base_forbid |= set(a_vec)
    diag = {
        "stage": "parking",
        "parking_tried": 0,
        "swap_misses": 0,
        "sparse_link_targets": 0,  # x's with no swap sextuple at all
        "found": False,
    }
    rng = np.random.default_rng(seed)
    share = max(1000, budget // 8)
    elves = find_elves(
        h4, family4, zeta, limit=4, forbidden=base_forbid, index4=index4,
        seed=int(rng.integers(2**62)), budget=share,
    )
    for elf in elves:
        diag["parking_tried"] += 1
        u_vec, x_vec, w_vec = elf[:4], elf[4:8], elf[8:]
        taken = base_forbid | set(elf)
        b_vecs = []
        for i in range(4):
            target = a_vec[i] if a_vec else None
            hits = joint_link_paths(
                h4, target, x_vec[i], index4, zeta, limit=1,
                forbidden=taken, seed=int(rng.integers(2**62)), budget=share,
            )
            if not hits:
                diag["swap_misses"] += 1
                if not joint_link_paths(
                    h4, target, x_vec[i], index4, zeta, limit=1,
                    forbidden=base_forbid | set(elf),
                    seed=int(rng.integers(2**62)), budget=share // 2,
                ):
                    diag["sparse_link_targets"] += 1
                b_vecs = None
                break
            b_vecs.append(hits[0])
            taken |= set(hits[0])
        if b_vecs is None:
            diag["stage"] = "swap-paths"
            continue
        ab = Absorber(
            b_vecs=tuple(b_vecs), u_vec=u_vec, x_vec=x_vec, w_vec=w_vec,
            a_vec=a_vec,
        )
        problems = ab.verify(h4, index4)
        assert not problems, f"assembled absorber fails invariants: {problems}"
        diag["found"] = True
        diag["stage"] = "done"
        return ab, diag
    return None, diag


def find_absorber(h4, family4, index4, a_vec=None, zeta=None, forbidden=(),
                  budget: int = 60_000, seed: int = 0):
    """An absorber avoiding `forbidden` (and a_vec), or None after budget."""
    ab, _ = find_absorber_ex(h4, family4, index4, a_vec, zeta, forbidden,
                             budget, seed)
    return ab


# ------------------------------------------------------------- path builder


@dataclass(frozen=True)
class AbsorbConfig:
    """Knobs for build_absorbing_path.

    join_inner is the inner-vertex count of the connections between
    segments; None requests the residue-2 menu value (the full-size choice),
    any other value is a desk override and is flagged in every report.
    extra_blocks stretches the path by 4 vertices apiece (for parity
    steering): via longer joins when there are absorbers, via one-vertex
    extension hops when there are none.
    """

    n_absorbers: int = 1
    extra_blocks: int = 0
    join_inner: int | None = 2
    discovery_limit: int = 4
    budget: int = 60_000
    seed: int = 0

    def __post_init__(self):
        if self.n_absorbers < 0:
            raise HypergraphError("n_absorbers must be nonnegative")
        if self.extra_blocks < 0:
            raise HypergraphError("extra_blocks must be nonnegative")
        if self.join_inner is not None and (
            not isinstance(self.join_inner, int) or self.join_inner % 4 != 2
        ):
            raise HypergraphError(
                f"join_inner must be 2 mod 4 (path-parity), got {self.join_inner!r}"
            )


@dataclass(frozen=True)
class AbsorbingPath:
    """A tight path carrying embedded absorbers, ready to absorb 4k spares."""

    path: TightPath
    absorbers: tuple
    segments: tuple  # dicts: absorber index (or None), role, offset, length
    joins: tuple  # dicts: after-segment index, inner count, strategy
    config: dict
    host: Hypergraph = field(repr=False)
    index: ConnectivityIndex4 = field(repr=False)
    reservoir_size: int = 0

    @property
    def n_vertices(self) -> int:
        return len(self.path.vertices)

    def segment_of(self, absorber_idx: int, role: str) -> dict:
        for seg in self.segments:
            if seg["absorber"] == absorber_idx and seg["role"] == role:
                return seg
        raise KeyError(f"no segment for absorber {absorber_idx} role {role}")

    def to_dict(self) -> dict:
        return {
            "n": self.host.n,
            "vertices": list(self.path.vertices),
            "length": self.n_vertices,
            "end_triples": [list(t) for t in end_triples(self.path)],
            "segments": [dict(s) for s in self.segments],
            "joins": [dict(j) for j in self.joins],
            "absorbers": [
                {
                    "b_vecs": [list(b) for b in ab.b_vecs],
                    "u_vec": list(ab.u_vec),
                    "x_vec": list(ab.x_vec),
                    "w_vec": list(ab.w_vec),
                    "a_vec": list(ab.a_vec) if ab.a_vec else None,
                }
                for ab in self.absorbers
            ],
            "config": dict(self.config),
            "reservoir_size": self.reservoir_size,
        }


def build_absorbing_path(
    h4: Hypergraph,
    family4: RobustFamily4,
    index4: ConnectivityIndex4,
    reservoir,
    config: AbsorbConfig | None = None,
    forbidden=(),
) -> AbsorbingPath:
    """Collect disjoint absorbers, lay their five-path segments out in order,
    and join consecutive segments with connections that avoid the reservoir
    and everything already placed.  The result stays within theta* * n
    vertices and has connectable end triples.
    """
    cfg = config if config is not None else AbsorbConfig()
    n = h4.n
    menu = residue_lengths(4, family4.ell)
    join_base = menu.for_residue(2) if cfg.join_inner is None else cfg.join_inner
    menu_deviation = join_base != menu.for_residue(2)
    rng = np.random.default_rng(cfg.seed)
    forbid = set(int(v) for v in forbidden) | set(reservoir.reservoir)
    diag: dict = {
        "absorbers_found": 0,
        "requested": cfg.n_absorbers,
        "join_inner_base": join_base,
        "menu_deviation": menu_deviation,
        "paper_join_inner": menu.for_residue(2),
    }

    absorbers = []
    for _ in range(cfg.n_absorbers):
        ab, ad = find_absorber_ex(
            h4, family4, index4, a_vec=None, forbidden=forbid,
            budget=cfg.budget, seed=int(rng.integers(2**62)),
        )
        if ab is None:
            diag["last_absorber_diag"] = ad
            raise BuildAbsorbingError("absorber-collection", diag)
        absorbers.append(ab)
        forbid |= set(ab.vertices)
        diag["absorbers_found"] += 1

    # segment inventory in embedding order
    seg_paths: list[tuple] = []
    seg_meta: list[dict] = []
    if absorbers:
        for ai, ab in enumerate(absorbers):
            for ri, path in enumerate(ab.five_paths):
                role = f"b{ri + 1}" if ri < 4 else "parking"
                seg_paths.append(path)
                seg_meta.append({"absorber": ai, "role": role})
    else:
        elves = find_elves(
            h4, family4, limit=1, forbidden=forbid, index4=index4,
            seed=int(rng.integers(2**62)), budget=cfg.budget,
        )
        if not elves:
            raise BuildAbsorbingError("absorber-collection", diag)
        elf = elves[0]
        seed_path = elf[:4] + elf[8:]  # the 7-vertex parking path alone
        seg_paths.append(seed_path)
        seg_meta.append({"absorber": None, "role": "seed"})
        forbid |= set(seed_path)

    joins_needed = len(seg_paths) - 1
    extras = [0] * max(joins_needed, 1)
    hops = 0
    if joins_needed:
        for b in range(cfg.extra_blocks):
            extras[b % joins_needed] += 1
    else:
        hops = cfg.extra_blocks

    current = list(seg_paths[0])
    segments = [dict(seg_meta[0], offset=0, length=len(seg_paths[0]))]
    joins: list[dict] = []
    allowed = np.ones(n, dtype=bool)
    for v in forbid:
        allowed[v] = False

    for j in range(1, len(seg_paths)):
        inner = join_base + 4 * extras[j - 1]
        tail = tuple(current[-3:])
        head = seg_paths[j][:3]
        conn_path, cdiag = connect4_ex(
            h4, family4, index4, tail, head, inner_count=inner,
            allowed=allowed, budget=cfg.budget,
            seed=int(rng.integers(2**62)),
        )
        if conn_path is None:
            diag["failed_join"] = {"after_segment": j - 1, "inner": inner,
                                   "detail": cdiag}
            raise BuildAbsorbingError("connection", diag)
        jv = conn_path.vertices[3:-3]
        for v in jv:
            allowed[v] = False
        offset = len(current) + len(jv)
        current = current + list(jv) + list(seg_paths[j])
        segments.append(dict(seg_meta[j], offset=offset, length=len(seg_paths[j])))
        joins.append({
            "after_segment": j - 1,
            "inner": inner,
            "strategy": cdiag["strategy"],
            "menu_deviation": cdiag["menu_deviation"],
        })

    for _ in range(hops):
        # one-vertex extension to a fresh connectable triple: +4 vertices
        tail = tuple(current[-3:])
        target = _sample_conn_triple(index4, allowed, rng, avoid=set(current))
        if target is None:
            raise BuildAbsorbingError("connection", dict(diag, failed_join="extension"))
        conn_path, cdiag = connect4_ex(
            h4, family4, index4, tail, target, inner_count=1,
            allowed=allowed, budget=cfg.budget,
            seed=int(rng.integers(2**62)),
        )
        if conn_path is None:
            diag["failed_join"] = {"extension": True, "detail": cdiag}
            raise BuildAbsorbingError("connection", diag)
        ext = conn_path.vertices[3:]
        for v in ext:
            allowed[v] = False
        current = current + list(ext)
        joins.append({"after_segment": len(segments) - 1, "inner": 1,
                      "extension": True, "strategy": cdiag["strategy"],
                      "menu_deviation": cdiag["menu_deviation"]})

    cert = validate(current, h4, kind="path")
    if not cert.ok:
        raise BuildAbsorbingError("connection", dict(diag, invalid=str(cert)))
    if set(current) & set(reservoir.reservoir):
        raise BuildAbsorbingError("connection", dict(diag, reservoir_overlap=True))
    cap = reservoir.theta_star * n
    if len(current) > cap:
        raise BuildAbsorbingError(
            "size", dict(diag, length=len(current), cap=cap)
        )
    first, last = tuple(current[:3]), tuple(current[-3:])
    if not (index4.conn[first] and index4.conn[last]):
        raise BuildAbsorbingError("connection", dict(diag, ends_not_connectable=True))

    return AbsorbingPath(
        path=TightPath(4, tuple(current)),
        absorbers=tuple(absorbers),
        segments=tuple(segments),
        joins=tuple(joins),
        config={
            "n_absorbers": cfg.n_absorbers,
            "extra_blocks": cfg.extra_blocks,
            "join_inner": join_base,
            "menu_deviation": menu_deviation,
            "paper_join_inner": menu.for_residue(2),
            "seed": cfg.seed,
            "budget": cfg.budget,
        },
        host=h4,
        index=index4,
        reservoir_size=len(reservoir.reservoir),
    )


def _sample_conn_triple(index4, allowed, rng, avoid, tries: int = 400):
    n = index4.n
    for _ in range(tries):
        t = tuple(int(v) for v in rng.integers(0, n, 3))
        if len(set(t)) != 3 or set(t) & avoid:
            continue
        if not (allowed[t[0]] and allowed[t[1]] and allowed[t[2]]):
            continue
        if index4.conn[t]:
            return t
    return None


# ------------------------------------------------------------------ absorb


def absorb(ap: AbsorbingPath, z_set, seed: int | None = None) -> TightPath:
    """Swap |Z|/4 quadruples into the path: for each quadruple an unused
    absorber whose four swap paths accept the four vertices (under some of
    the 24 assignments, first fit in seeded order) absorbs it — z_i replaces
    x_i and the four x's move into the parking segment.  Ends never move.
    """
    zs = sorted(set(int(v) for v in z_set))
    if len(zs) % 4 != 0:
        raise AbsorbError(f"|Z| = {len(zs)} is not divisible by 4")
    pv = list(ap.path.vertices)
    overlap = set(zs) & set(pv)
    if overlap:
        raise AbsorbError(f"Z overlaps the absorbing path at {sorted(overlap)}")
    if not zs:
        return ap.path

    rng = np.random.default_rng(ap.config.get("seed", 0) if seed is None else seed)
    zs = [zs[i] for i in rng.permutation(len(zs))]
    quads = [tuple(zs[4 * i : 4 * i + 4]) for i in range(len(zs) // 4)]
    e4 = edge_tensor(ap.host)

    used: set = set()
    plan: list = []  # (absorber index, assignment tuple)
    for quad in quads:
        hit = None
        for ai, ab in enumerate(ap.absorbers):
            if ai in used:
                continue
            for perm in itertools.permutations(quad):
                if all(ab.swap_feasible(e4, perm[i], i) for i in range(4)):
                    hit = (ai, perm)
                    break
            if hit:
                break
        if hit is None:
            raise AbsorbError(f"no feasible absorber for quadruple {quad}")
        used.add(hit[0])
        plan.append(hit)

    # swaps keep offsets intact; do them first
    for ai, perm in plan:
        ab = ap.absorbers[ai]
        for i in range(4):
            seg = ap.segment_of(ai, f"b{i + 1}")
            off = seg["offset"]
            expect = ab.five_paths[i]
            if tuple(pv[off : off + 7]) != expect:
                raise AbsorbError(
                    f"segment mismatch for absorber {ai} path {i}: "
                    f"path was modified since construction"
                )
            pv[off + 3] = perm[i]
    # insertions from the right so earlier offsets stay valid
    for off, ai in sorted(
        ((ap.segment_of(ai, "parking")["offset"], ai) for ai, _ in plan),
        reverse=True,
    ):
        ab = ap.absorbers[ai]
        if tuple(pv[off + 4 : off + 7]) != ab.w_vec:
            raise AbsorbError(
                f"parking segment mismatch for absorber {ai}: "
                f"path was modified since construction"
            )
        pv[off + 4 : off + 4] = list(ab.x_vec)

    out = TightPath(4, tuple(pv))
    cert = validate(list(out.vertices), ap.host, kind="path")
    if not cert.ok:
        raise AbsorbError(f"absorbed path failed validation: {cert}")
    if end_triples(out) != end_triples(ap.path):
        raise AbsorbError("absorption moved the end triples")
    if set(out.vertices) != set(ap.path.vertices) | set(zs):
        raise AbsorbError("vertex-set identity violated after absorption")
    return out
