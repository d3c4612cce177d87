"""Constructive connecting procedures for 3- and 4-uniform hosts, the
residue-class length menus, and the inner-vertex reservoir.

The guided strategies realize one witness path by following the structure
that makes such paths abundant: interleaving anchor vertices whose robust
link subgraphs carry a short walk (3-uniform), and, one level up, stitching
two in-link 3-uniform connections through a pair whose robust link hosts a
3-edge walk (4-uniform).  A plain DFS over the host acts as fallback, so the
contract — a valid path with the exact requested inner count, or ``None``
after the node budget — never depends on the guided pattern succeeding.

Budgets count search-node expansions across all strategies of one call.
Candidate order everywhere is a seeded permutation of the vertex labels, so
equal seeds reproduce equal paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import _kernels as kernels
from .connectivity import (
    ConnectivityIndex3,
    ConnectivityIndex4,
    RobustFamily3,
    RobustFamily4,
    count_threshold,
    edge_tensor,
    pair_index,
)
from .hypercore import Hypergraph, HypergraphError
from .tightpaths import TightPath, validate

__all__ = [
    "PreconditionError",
    "BudgetExceeded",
    "ReservoirFailure",
    "LengthMenu",
    "ReservoirState",
    "residue_lengths",
    "connect3",
    "connect3_ex",
    "connect4",
    "connect4_ex",
    "sample_reservoir",
    "reserve_connect",
    "reserve_connect_ex",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 250_000

# small residue-correct inner counts used when a desk run cannot afford the
# paper menu; every report that uses them flags the deviation
DESK_INNER_BY_RESIDUE = {1: 5, 2: 2, 3: 3, 4: 4}


class PreconditionError(HypergraphError):
    """A connecting-procedure precondition failed (non-connectable or
    overlapping end tuples)."""


class BudgetExceeded(RuntimeError):
    """Reservoir accounting would overflow; distinct from a search miss."""

    def __init__(self, message: str, needed: int, available: int):
        super().__init__(message)
        self.needed = needed
        self.available = available


class ReservoirFailure(RuntimeError):
    """The sampled reservoir violated the size clause in every attempt."""


# -------------------------------------------------------------------- menus


@dataclass(frozen=True)
class LengthMenu:
    """Inner-vertex counts covering every residue class mod k."""

    k: int
    ell: int
    inner_counts: tuple[int, ...]

    def for_residue(self, i: int) -> int:
        """Menu value for residue class i (1..k; i = k means 0 mod k)."""
        if not isinstance(i, int) or not (1 <= i <= self.k):
            raise HypergraphError(f"residue must be in 1..{self.k}, got {i!r}")
        return self.inner_counts[i - 1]

    @property
    def cap(self) -> int:
        return 50 * self.ell if self.k == 4 else 12 * self.ell


def residue_lengths(k: int, ell: int) -> LengthMenu:
    """The per-residue inner counts: (32l+49, 8l+10, 16l+23, 24l+36) for
    k=4 and (3l+1, 6l+5, 9l+9) for k=3."""
    if k not in (3, 4):
        raise HypergraphError(f"k must be 3 or 4, got {k!r}")
    if not isinstance(ell, int) or ell < 3 or ell % 2 == 0:
        raise HypergraphError(f"ell must be an odd integer >= 3, got {ell!r}")
    if k == 4:
        counts = (32 * ell + 49, 8 * ell + 10, 16 * ell + 23, 24 * ell + 36)
    else:
        counts = (3 * ell + 1, 6 * ell + 5, 9 * ell + 9)
    menu = LengthMenu(k, ell, counts)
    assert all(c % k == (i + 1) % k for i, c in enumerate(counts))
    assert all(c <= menu.cap for c in counts)
    return menu


# ----------------------------------------------------------------- plumbing


class _Budget:
    __slots__ = ("remaining", "spent")

    def __init__(self, total: int):
        if not isinstance(total, int) or total <= 0:
            raise HypergraphError(f"budget must be a positive integer, got {total!r}")
        self.remaining = total
        self.spent = 0

    def step(self, cost: int = 1) -> bool:
        if self.remaining < cost:
            self.remaining = 0
            return False
        self.remaining -= cost
        self.spent += cost
        return True


def _allowed_mask(allowed, n: int) -> np.ndarray:
    if allowed is None:
        return np.ones(n, dtype=bool)
    if isinstance(allowed, np.ndarray) and allowed.dtype == bool:
        if allowed.shape != (n,):
            raise HypergraphError(f"allowed mask must have shape ({n},)")
        return allowed.copy()
    mask = np.zeros(n, dtype=bool)
    for v in allowed:
        v = int(v)
        if not 0 <= v < n:
            raise HypergraphError(f"allowed vertex {v} outside 0..{n - 1}")
        mask[v] = True
    return mask


def _sorted_by(cands: np.ndarray, priority: np.ndarray) -> np.ndarray:
    if len(cands) <= 1:
        return cands
    return cands[np.argsort(priority[cands], kind="stable")]


def _check_tuple(name: str, tup, n: int, size: int):
    vs = tuple(int(v) for v in tup)
    if len(vs) != size or len(set(vs)) != size:
        raise PreconditionError(f"{name} must be {size} distinct vertices, got {tup}")
    for v in vs:
        if not 0 <= v < n:
            raise PreconditionError(f"{name} vertex {v} outside 0..{n - 1}")
    return vs


# ---------------------------------------------------- guided 3-uniform core


@dataclass
class _Link3Ctx:
    """What the interleaved pattern needs from a 3-uniform environment."""

    n: int
    e3: np.ndarray  # (n,n,n) bool, raw window membership

    def witness(self, x: int, y: int) -> np.ndarray:
        raise NotImplementedError

    def robust_row(self, u: int, x: int) -> np.ndarray:
        """(n,) bool: vertices y with xy an edge of u's robust subgraph."""
        raise NotImplementedError

    def robust_entries(self, us: np.ndarray, x: int, y: int) -> np.ndarray:
        """Per candidate u: is xy an edge of u's robust subgraph."""
        raise NotImplementedError


@dataclass
class _HostCtx(_Link3Ctx):
    family: RobustFamily3 = None
    index: ConnectivityIndex3 = None

    def witness(self, x, y):
        return self.index.witnesses(x, y)

    def robust_row(self, u, x):
        return self.family.r_adj[u, x]

    def robust_entries(self, us, x, y):
        return self.family.r_adj[us, x, y]


@dataclass
class _AnchorCtx(_Link3Ctx):
    """The link of `anchor` in a 4-uniform host; robust structure comes from
    the pair links R_{u,anchor}."""

    family4: RobustFamily4 = None
    anchor: int = -1
    _rows: np.ndarray = None  # pair_index(u, anchor) for u != anchor
    _labels: np.ndarray = None

    def __post_init__(self):
        n = self.family4.n
        a = self.anchor
        self._labels = np.array([u for u in range(n) if u != a], dtype=np.int64)
        self._rows = np.array(
            [pair_index(u, a, n) for u in self._labels], dtype=np.int64
        )

    def _row_ids(self, us: np.ndarray) -> np.ndarray:
        n = self.family4.n
        a = self.anchor
        lo = np.minimum(us, a)
        hi = np.maximum(us, a)
        return lo * (2 * n - lo - 1) // 2 + (hi - lo - 1)

    def witness(self, x, y):
        hits = self.family4.r_adj[self._rows, x, y]
        return self._labels[hits]

    def robust_row(self, u, x):
        return self.family4.r_adj[pair_index(u, self.anchor, self.family4.n), x]

    def robust_entries(self, us, x, y):
        if len(us) == 0:
            return np.zeros(0, dtype=bool)
        return self.family4.r_adj[self._row_ids(np.asarray(us)), x, y]


def _guided3(ctx: _Link3Ctx, a, b, x, y, inner, allowed, used, budget, priority):
    """Interleaved-anchor search: returns the full vertex sequence or None.

    Pattern for inner = 3t+1+extra (extra in {0,1,2}): a b u1 d d u2 d d ...
    u_{t+1} [extras] x y, where each window holds because its one anchor u_i
    sees the adjacent walk edges inside its robust subgraph; the <= 2 windows
    past the last anchor are checked against the raw edge tensor.
    """
    n = ctx.n
    if inner == 0:
        if not budget.step():
            return None
        if ctx.e3[a, b, x] and ctx.e3[b, x, y]:
            return [a, b, x, y]
        return None
    t = (inner - 1) // 3
    extra = (inner - 1) % 3
    nd = 2 * t + 2 + extra  # walk slots before the fixed pair (x, y)
    d = [a, b] + [-1] * (nd - 2)
    u = [-1] * (t + 2)  # 1-indexed anchors

    plan: list[tuple[str, int]] = []
    for i in range(1, t + 2):
        plan.append(("u", i))
        if i <= t:
            plan.append(("d", 2 * i))
            plan.append(("d", 2 * i + 1))
    for j in range(extra):
        plan.append(("d", 2 * t + 2 + j))

    def candidates(step: int) -> np.ndarray:
        kind, i = plan[step]
        free = allowed & ~used
        if kind == "u":
            cand = ctx.witness(d[2 * i - 2], d[2 * i - 1])
            if len(cand) == 0:
                return cand
            keep = free[cand]
            if i == t + 1 and extra == 0:
                # the last anchor alone covers the two terminal windows
                keep &= ctx.robust_entries(cand, d[2 * t + 1], x)
                keep &= ctx.robust_entries(cand, x, y)
            return cand[keep]
        j = i
        if j <= 2 * t + 1:
            mask = free & ctx.robust_row(u[j // 2], d[j - 1])
        elif extra == 1:
            last = u[t + 1]
            mask = (
                free
                & ctx.robust_row(last, d[j - 1])
                & ctx.robust_row(last, x)
                & ctx.e3[:, x, y]
            )
        elif j == 2 * t + 2:  # first of two extras
            mask = free & ctx.robust_row(u[t + 1], d[j - 1])
        else:  # second extra: two raw windows into the fixed end
            mask = (
                free
                & ctx.robust_row(u[t + 1], d[j - 1])
                & ctx.e3[d[j - 1], :, x]
                & ctx.e3[:, x, y]
            )
        return np.flatnonzero(mask)

    def place(step: int) -> bool:
        if step == len(plan):
            return True
        if not budget.step():
            return False
        kind, i = plan[step]
        for v in _sorted_by(candidates(step), priority):
            v = int(v)
            if kind == "u":
                u[i] = v
            else:
                d[i] = v
            used[v] = True
            if place(step + 1):
                return True
            used[v] = False
            if budget.remaining == 0:
                return False
        return False

    ends = (a, b, x, y)
    prev = [used[v] for v in ends]
    for v in ends:
        used[v] = True
    ok = place(0)
    for v, was in zip(ends, prev):
        used[v] = was
    if not ok:
        return None
    seq = [a, b]
    for i in range(1, t + 2):
        seq.append(u[i])
        if i <= t:
            seq.extend((d[2 * i], d[2 * i + 1]))
    seq.extend(d[2 * t + 2 :])
    seq.extend((x, y))
    for v in seq[2:-2]:
        used[v] = True  # caller owns the reservation now
    return seq


def _tensor_path_dfs(e, start, target, inner, allowed, used, budget, priority):
    """Plain DFS over an order-k boolean tensor; used where no CSR index of
    the searched (sub)hypergraph exists.  Returns the full sequence or None."""
    k = e.ndim
    seq = list(start) + [-1] * inner + list(target)
    ends = tuple(start) + tuple(target)
    prev = [used[v] for v in ends]
    for v in ends:
        used[v] = True

    def seam_ok() -> bool:
        # the k-1 windows that straddle the last placed slot and the target
        for s in range(inner, inner + k - 1):
            if not e[tuple(seq[s : s + k])]:
                return False
        return True

    def dfs(placed: int) -> bool:
        if not budget.step():
            return False
        if placed == inner:
            return seam_ok()
        at = k - 2 + placed
        window = tuple(seq[at - k + 2 : at + 1])
        mask = e[window] & allowed & ~used
        for v in _sorted_by(np.flatnonzero(mask), priority):
            v = int(v)
            seq[at + 1] = v
            used[v] = True
            if dfs(placed + 1):
                return True
            used[v] = False
            if budget.remaining == 0:
                return False
        return False

    ok = dfs(0)
    for v, was in zip(ends, prev):
        used[v] = was
    if not ok:
        return None
    for v in seq[len(start) : len(start) + inner]:
        used[v] = True
    return seq


# ------------------------------------------------------------ 3-uniform op


def connect3_ex(
    h3: Hypergraph,
    family3: RobustFamily3,
    index3: ConnectivityIndex3,
    pair_a,
    pair_b,
    inner_count: int,
    allowed=None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
):
    """connect3 plus its diagnostics dict (strategy, nodes, inner, residue)."""
    n = h3.n
    if h3.k != 3:
        raise HypergraphError(f"connect3 needs a 3-uniform host, got k={h3.k}")
    a, b = _check_tuple("start pair", pair_a, n, 2)
    x, y = _check_tuple("end pair", pair_b, n, 2)
    if {a, b} & {x, y}:
        raise PreconditionError(f"end pairs overlap: {pair_a} vs {pair_b}")
    for name, (p, q) in (("start", (a, b)), ("end", (x, y))):
        if not index3.conn[p, q]:
            raise PreconditionError(
                f"{name} pair ({p}, {q}) is not {index3.zeta}-connectable"
            )
    if not isinstance(inner_count, int) or inner_count < 0:
        raise HypergraphError(f"inner_count must be a nonnegative int, got {inner_count!r}")

    mask = _allowed_mask(allowed, n)
    bud = _Budget(budget)
    rng = np.random.default_rng(seed)
    priority = rng.permutation(n)
    used = np.zeros(n, dtype=bool)
    diag = {
        "op": "connect3",
        "inner": inner_count,
        "residue": inner_count % 3,
        "strategy": None,
        "nodes": 0,
        "found": False,
    }

    pool = int(mask.sum()) - sum(1 for v in {a, b, x, y} if mask[v])
    if inner_count > pool:
        diag["infeasible"] = True
        return None, diag

    ctx = _HostCtx(n=n, e3=edge_tensor(h3), family=family3, index=index3)
    seq = _guided3(ctx, a, b, x, y, inner_count, mask, used, bud, priority)
    strategy = "proof-guided"
    if seq is None and bud.remaining > 0:
        strategy = "direct"
        idx = kernels.window_index(h3)
        status, inner_path, exp = kernels.find_path_exact(
            idx, (a, b), (x, y), inner_count, mask.astype(np.uint8), bud.remaining
        )
        bud.step(min(int(exp), bud.remaining))
        if status == "found":
            seq = [a, b] + list(inner_path) + [x, y]
    diag["nodes"] = bud.spent
    if seq is None:
        return None, diag
    cert = validate(seq, h3, kind="path")
    assert cert.ok, f"connector produced an invalid path: {cert}"
    diag["strategy"] = strategy
    diag["found"] = True
    return TightPath(3, tuple(seq)), diag


def connect3(h3, family3, index3, pair_a, pair_b, inner_count,
             allowed=None, budget: int = DEFAULT_BUDGET, seed: int = 0):
    """Tight path from ordered pair_a to pair_b with exactly `inner_count`
    inner vertices drawn from `allowed`; None if the budget runs out."""
    path, _ = connect3_ex(h3, family3, index3, pair_a, pair_b, inner_count,
                          allowed, budget, seed)
    return path


# ------------------------------------------------------------ 4-uniform op


def _zeta3_threshold(index4: ConnectivityIndex4) -> int:
    z = Fraction(str(index4.zeta)) ** 3
    return count_threshold(z, index4.n - 1)


def _guided4(h4, family4, index4, abc, xyz, allowed, used, bud, priority, diag):
    """The two-level assembly with 8*ell+10 inner vertices.

    For a sampled pair (u*, w*) of triple witnesses, a 4-vertex walk q in
    R_{u*w*} splits the job into two in-link 3-uniform connections (b,c) ->
    (q1,q2) inside the link of u* and (q3,q4) -> (x,y) inside the link of
    w*; the remaining ell+1 anchors per side are any vertices whose links
    contain the finished 3-uniform paths entirely.
    """
    ell = family4.ell
    n = family4.n
    a, b, c = abc
    x, y, z = xyz
    e4 = edge_tensor(h4)
    thr3 = _zeta3_threshold(index4)
    seg = 3 * ell + 1  # inner count of each in-link connection

    ends = (a, b, c, x, y, z)
    prev = [used[v] for v in ends]
    for v in ends:
        used[v] = True
    try:
        free = allowed & ~used
        u_pool = index4.witnesses(a, b, c)
        u_cands = _sorted_by(u_pool[free[u_pool]], priority)
        w_pool = index4.witnesses(x, y, z)
        w_cands = _sorted_by(w_pool[free[w_pool]], priority)
        for u_star in u_cands[:16]:
            u_star = int(u_star)
            for w_star in w_cands[:16]:
                w_star = int(w_star)
                if w_star == u_star:
                    continue
                if not bud.step():
                    return None
                seq = _guided4_attempt(
                    h4, family4, index4, e4, thr3, seg,
                    (a, b, c), (x, y, z), u_star, w_star,
                    allowed, used, bud, priority, diag,
                )
                if seq is not None:
                    return seq
                if bud.remaining == 0:
                    return None
        return None
    finally:
        for v, was in zip(ends, prev):
            used[v] = was


def _guided4_attempt(h4, family4, index4, e4, thr3, seg, abc, xyz,
                     u_star, w_star, allowed, used, bud, priority, diag):
    n = family4.n
    r_uw = family4.r_edges(u_star, w_star)
    cil_u = index4.link_pair_counts[u_star] >= thr3
    cil_w = index4.link_pair_counts[w_star] >= thr3

    used[u_star] = True
    used[w_star] = True
    free = allowed & ~used
    success = False
    try:
        # 3-edge walks q1 q2 q3 q4 in R_{u*w*} with the outer pairs
        # connectable inside the respective links (at zeta^3)
        q_pairs = np.argwhere(r_uw & free[:, None] & free[None, :])
        if len(q_pairs):
            key = priority[q_pairs[:, 0]] * n + priority[q_pairs[:, 1]]
            q_pairs = q_pairs[np.argsort(key, kind="stable")]
        tried_q = 0
        for q2, q3 in q_pairs:
            if tried_q >= 24 or bud.remaining == 0:
                break
            q2, q3 = int(q2), int(q3)
            if q2 == q3:
                continue
            q1s = np.flatnonzero(r_uw[q2] & cil_u[q2] & free)
            q4s = np.flatnonzero(r_uw[q3] & cil_w[q3] & free)
            for q1 in _sorted_by(q1s, priority)[:4]:
                q1 = int(q1)
                if q1 in (q2, q3):
                    continue
                hit_cap = False
                for q4 in _sorted_by(q4s, priority)[:4]:
                    q4 = int(q4)
                    if q4 in (q1, q2, q3):
                        continue
                    tried_q += 1
                    if not bud.step():
                        return None
                    seq = _guided4_with_q(
                        family4, index4, e4, seg, abc, xyz,
                        u_star, w_star, (q1, q2, q3, q4),
                        allowed, used, bud, priority,
                    )
                    if seq is not None:
                        success = True  # stars stay reserved inside the path
                        return seq
                    if tried_q >= 24 or bud.remaining == 0:
                        hit_cap = True
                        break
                if hit_cap:
                    break
        return None
    finally:
        if not success:
            used[u_star] = False
            used[w_star] = False


def _guided4_with_q(family4, index4, e4, seg, abc, xyz, u_star, w_star,
                    q, allowed, used, bud, priority):
    a, b, c = abc
    x, y, z = xyz
    n = family4.n
    ell = family4.ell
    q1, q2, q3, q4 = q
    for v in q:
        used[v] = True
    reserved = list(q)

    def fail():
        for v in reserved:
            used[v] = False
        return None

    ctx_u = _AnchorCtx(n=n, e3=e4[u_star], family4=family4, anchor=u_star)
    sub = _Budget(max(1, min(bud.remaining, 20_000)))
    p_seq = _guided3(ctx_u, b, c, q1, q2, seg, allowed, used, sub, priority)
    if p_seq is None and sub.remaining > 0:
        p_seq = _tensor_path_dfs(
            e4[u_star], [b, c], [q1, q2], seg, allowed, used, sub, priority
        )
    bud.step(min(sub.spent, bud.remaining))
    if p_seq is None:
        return fail()
    p_inner = p_seq[2:-2]  # marked used by the search on success
    reserved.extend(p_inner)

    ctx_w = _AnchorCtx(n=n, e3=e4[w_star], family4=family4, anchor=w_star)
    sub = _Budget(max(1, min(bud.remaining, 20_000)))
    r_seq = _guided3(ctx_w, q3, q4, x, y, seg, allowed, used, sub, priority)
    if r_seq is None and sub.remaining > 0:
        r_seq = _tensor_path_dfs(
            e4[w_star], [q3, q4], [x, y], seg, allowed, used, sub, priority
        )
    bud.step(min(sub.spent, bud.remaining))
    if r_seq is None:
        return fail()
    r_inner = r_seq[2:-2]
    reserved.extend(r_inner)

    # anchors: every window of the finished 3-uniform walks must lie in the
    # candidate's link, so one anchor choice works at all its positions
    d_vec = [b, c] + p_inner + [q1, q2]
    e_vec = [q3, q4] + r_inner + [x, y]
    valid_u = allowed & ~used
    for s in range(len(d_vec) - 2):
        valid_u &= e4[:, d_vec[s], d_vec[s + 1], d_vec[s + 2]]
    valid_w = allowed & ~used
    for s in range(len(e_vec) - 2):
        valid_w &= e4[:, e_vec[s], e_vec[s + 1], e_vec[s + 2]]
    bud.step(min(2 * (len(d_vec) - 2), bud.remaining))

    u_first = np.zeros(n, dtype=bool)
    u_first[index4.witnesses(a, b, c)] = True
    w_first = np.zeros(n, dtype=bool)
    w_first[index4.witnesses(x, y, z)] = True

    fill = _fill_anchors(valid_u, valid_w, u_first, w_first, ell + 1, priority)
    if fill is None:
        return fail()
    u_list, w_list = fill  # u_list[0] must see the start triple, etc.
    for v in u_list + w_list:
        used[v] = True
        reserved.append(v)

    seq = [a, b, c, u_list[0]]
    for i in range(1, ell + 1):
        seq.extend(p_inner[3 * i - 3 : 3 * i])
        seq.append(u_list[i])
    seq.extend((p_inner[3 * ell], q1, q2, u_star, w_star, q3, q4))
    seq.append(r_inner[0])
    for i in range(1, ell + 1):
        seq.append(w_list[i])
        seq.extend(r_inner[3 * i - 2 : 3 * i + 1])
    seq.extend((w_list[0], x, y, z))
    return seq


def _fill_anchors(valid_u, valid_w, u_first_mask, w_first_mask, need, priority):
    """Pick `need` distinct u-anchors and `need` distinct w-anchors from the
    two masks; the first of each side must additionally lie in the witness
    mask of its end triple.  Scarce side first, then greedy."""
    vu = valid_u.copy()
    vw = valid_w.copy()
    u1s = np.flatnonzero(vu & u_first_mask)
    if len(u1s) == 0:
        return None
    u1 = int(_sorted_by(u1s, priority)[0])
    vu[u1] = vw[u1] = False
    w1s = np.flatnonzero(vw & w_first_mask)
    if len(w1s) == 0:
        return None
    w1 = int(_sorted_by(w1s, priority)[0])
    vu[w1] = vw[w1] = False
    u_rest: list[int] = []
    w_rest: list[int] = []
    # alternate sides, scarcer first, to keep the shared pool balanced
    for _ in range(need - 1):
        for side in sorted(("u", "w"), key=lambda s: int(vu.sum() if s == "u" else vw.sum())):
            pool = vu if side == "u" else vw
            cand = np.flatnonzero(pool)
            if len(cand) == 0:
                return None
            v = int(_sorted_by(cand, priority)[0])
            vu[v] = vw[v] = False
            (u_rest if side == "u" else w_rest).append(v)
    return [u1] + u_rest, [w1] + w_rest


def _composed4(h4, family4, index4, abc, xyz, parts, allowed, used, bud,
               priority, rng, diag, depth=0):
    """Join two menu-length connections through a fresh connectable triple."""
    n = family4.n
    conn_rows = diag.setdefault("_conn_rows", None)
    if conn_rows is None:
        conn_rows = np.argwhere(index4.conn)
        diag["_conn_rows"] = conn_rows
    if len(conn_rows) == 0:
        return None
    forbidden = set(abc) | set(xyz)
    tries = 0
    order = rng.permutation(len(conn_rows))
    for row in order:
        if tries >= 20 or bud.remaining == 0:
            break
        d, e, f = (int(v) for v in conn_rows[row])
        if len({d, e, f}) != 3 or {d, e, f} & forbidden:
            continue
        if not (allowed[d] and allowed[e] and allowed[f]):
            continue
        if used[d] or used[e] or used[f]:
            continue
        tries += 1
        if not bud.step():
            return None
        for v in (d, e, f):
            used[v] = True
        seq1 = _menu_connect(h4, family4, index4, abc, (d, e, f), parts[0],
                             allowed, used, bud, priority, rng, diag, depth + 1)
        if seq1 is None:
            for v in (d, e, f):
                used[v] = False
            continue
        seq2 = _menu_connect(h4, family4, index4, (d, e, f), xyz, parts[1],
                             allowed, used, bud, priority, rng, diag, depth + 1)
        if seq2 is None:
            for v in seq1[3:-3]:
                used[v] = False
            for v in (d, e, f):
                used[v] = False
            continue
        return seq1 + seq2[3:]
    return None


def _menu_connect(h4, family4, index4, abc, xyz, residue, allowed, used, bud,
                  priority, rng, diag, depth):
    """Guided residue-2 assembly, or a recursive composition for the other
    residues: 3 = 2+2, 4 = 2+3, 1 = 3+3 (junction triple adds three)."""
    if residue == 2:
        return _guided4(h4, family4, index4, abc, xyz, allowed, used, bud,
                        priority, diag)
    parts = {3: (2, 2), 4: (2, 3), 1: (3, 3)}[residue]
    return _composed4(h4, family4, index4, abc, xyz, parts, allowed, used,
                      bud, priority, rng, diag, depth)


def connect4_ex(
    h4: Hypergraph,
    family4: RobustFamily4,
    index4: ConnectivityIndex4,
    triple_a,
    triple_b,
    residue: int | None = None,
    inner_count: int | None = None,
    allowed=None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
):
    """connect4 plus diagnostics.  Exactly one of residue / inner_count."""
    n = h4.n
    if h4.k != 4:
        raise HypergraphError(f"connect4 needs a 4-uniform host, got k={h4.k}")
    abc = _check_tuple("start triple", triple_a, n, 3)
    xyz = _check_tuple("end triple", triple_b, n, 3)
    if set(abc) & set(xyz):
        raise PreconditionError(f"end triples overlap: {triple_a} vs {triple_b}")
    for name, tri in (("start", abc), ("end", xyz)):
        if not index4.conn[tri]:
            raise PreconditionError(
                f"{name} triple {tri} is not {index4.zeta}-connectable"
            )
    if (residue is None) == (inner_count is None):
        raise HypergraphError("give exactly one of residue or inner_count")
    menu = residue_lengths(4, family4.ell)
    if residue is not None:
        inner = menu.for_residue(residue)
    else:
        if not isinstance(inner_count, int) or inner_count < 0:
            raise HypergraphError(
                f"inner_count must be a nonnegative int, got {inner_count!r}"
            )
        inner = inner_count

    mask = _allowed_mask(allowed, n)
    bud = _Budget(budget)
    rng = np.random.default_rng(seed)
    priority = rng.permutation(n)
    used = np.zeros(n, dtype=bool)
    diag = {
        "op": "connect4",
        "inner": inner,
        "residue": residue if residue is not None else inner % 4 or 4,
        "menu": list(menu.inner_counts),
        "menu_deviation": inner not in menu.inner_counts,
        "strategy": None,
        "nodes": 0,
        "found": False,
    }

    pool = int(mask.sum()) - sum(1 for v in set(abc) | set(xyz) if mask[v])
    if inner > pool:
        diag["infeasible"] = True
        return None, diag

    seq = None
    strategy = None
    if inner in menu.inner_counts:
        want = menu.inner_counts.index(inner) + 1
        for v in abc + xyz:
            used[v] = True
        seq = _menu_connect(h4, family4, index4, abc, xyz, want, mask, used,
                            bud, priority, rng, diag, 0)
        for v in abc + xyz:
            used[v] = False
        strategy = "proof-guided" if want == 2 else "composed"
    if seq is None and bud.remaining > 0:
        idx = kernels.window_index(h4)
        status, inner_path, exp = kernels.find_path_exact(
            idx, abc, xyz, inner, mask.astype(np.uint8), bud.remaining
        )
        bud.step(min(int(exp), bud.remaining))
        if status == "found":
            seq = list(abc) + list(inner_path) + list(xyz)
            strategy = "direct"
    diag.pop("_conn_rows", None)
    diag["nodes"] = bud.spent
    if seq is None:
        return None, diag
    cert = validate(seq, h4, kind="path")
    assert cert.ok, f"connector produced an invalid path: {cert}"
    assert len(seq) == 6 + inner
    assert all(mask[v] for v in seq[3:-3]), "inner vertex outside allowed"
    diag["strategy"] = strategy
    diag["found"] = True
    return TightPath(4, tuple(seq)), diag


def connect4(h4, family4, index4, triple_a, triple_b, residue=None,
             inner_count=None, allowed=None, budget: int = DEFAULT_BUDGET,
             seed: int = 0):
    """Tight path between the ordered triples with the menu count for
    `residue` (or exactly `inner_count`) inner vertices from `allowed`."""
    path, _ = connect4_ex(h4, family4, index4, triple_a, triple_b, residue,
                          inner_count, allowed, budget, seed)
    return path


# ---------------------------------------------------------------- reservoir


@dataclass
class ReservoirState:
    """Sampled inner-vertex pool R with its used subset R' and spend cap."""

    reservoir: frozenset
    n: int
    theta_star: float
    theta_star_star: float | None
    ell: int
    seed: int
    budget: int
    budget_mode: str  # "paper-formula" | "desk-full"
    used: set = field(default_factory=set)
    calls: int = 0
    validation: dict = field(default_factory=dict)

    def __post_init__(self):
        assert self.used <= self.reservoir
        assert len(self.used) <= self.budget

    @property
    def remaining(self) -> frozenset:
        return self.reservoir - self.used

    def allowed_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        for v in self.remaining:
            mask[v] = True
        return mask

    def spend(self, vertices: Iterable[int]):
        vs = set(int(v) for v in vertices)
        if not vs <= self.reservoir:
            raise HypergraphError(f"vertices {sorted(vs - self.reservoir)} not in the reservoir")
        if vs & self.used:
            raise HypergraphError(f"vertices {sorted(vs & self.used)} already spent")
        if len(self.used) + len(vs) > self.budget:
            raise BudgetExceeded(
                f"spending {len(vs)} exceeds budget {self.budget} "
                f"({len(self.used)} already used)",
                needed=len(vs), available=self.budget - len(self.used),
            )
        self.used |= vs

    def to_dict(self) -> dict:
        return {
            "size": len(self.reservoir),
            "used": len(self.used),
            "budget": self.budget,
            "budget_mode": self.budget_mode,
            "theta_star": self.theta_star,
            "theta_star_star": self.theta_star_star,
            "ell": self.ell,
            "seed": self.seed,
            "validation": self.validation,
        }


def sample_reservoir(
    h4: Hypergraph,
    family4: RobustFamily4,
    theta_star: float,
    zeta_ss: float,
    seed: int,
    validation_samples: int = 8,
    index4: ConnectivityIndex4 | None = None,
    theta_star_star: float | None = None,
    ell: int | None = None,
) -> ReservoirState:
    """Independent inclusion with probability (3/4)*theta_star^2; the exact
    size clause theta*^2 n/2 <= |R| <= theta*^2 n gets 10 attempts.  The
    connection clause is spot-checked by running small connections with all
    inner vertices restricted to R (per-residue rates; logged, not a proof).
    """
    if not (0 < theta_star < 1):
        raise HypergraphError(f"theta_star must be in (0, 1), got {theta_star}")
    n = h4.n
    ell = family4.ell if ell is None else ell
    ts = Fraction(str(theta_star))
    p = float(Fraction(3, 4) * ts * ts)
    lo, hi = ts * ts * n / 2, ts * ts * n
    rng = np.random.default_rng(seed)
    members = None
    attempts = 0
    for attempts in range(1, 11):
        draw = np.flatnonzero(rng.random(n) < p)
        if lo <= len(draw) <= hi:
            members = draw
            break
    if members is None:
        raise ReservoirFailure(
            f"size clause {float(lo):.2f} <= |R| <= {float(hi):.2f} failed in 10 samples"
        )

    if index4 is None:
        from .connectivity import connectable_triples

        index4 = connectable_triples(family4, zeta_ss)
    state = ReservoirState(
        reservoir=frozenset(int(v) for v in members),
        n=n,
        theta_star=float(theta_star),
        theta_star_star=theta_star_star,
        ell=ell,
        seed=seed,
        budget=(
            math.floor(
                float(Fraction(str(theta_star))) ** 2 * theta_star_star / (400 * ell) * n
            )
            if theta_star_star is not None
            else len(members)
        ),
        budget_mode="paper-formula" if theta_star_star is not None else "desk-full",
    )

    conn_rows = np.argwhere(index4.conn)
    report: dict = {
        "samples": 0,
        "menu_deviation": True,
        "paper_menu": list(residue_lengths(4, ell).inner_counts),
        "inclusion_p": p,
        "attempts_to_size": attempts,
        "per_residue": {},
    }
    mask = state.allowed_mask()
    if len(conn_rows) and validation_samples > 0:
        per = {i: {"inner": DESK_INNER_BY_RESIDUE[i], "attempts": 0, "successes": 0}
               for i in (1, 2, 3, 4)}
        for s in range(validation_samples):
            pick = None
            for _ in range(20):
                i1, i2 = rng.integers(0, len(conn_rows), 2)
                t1 = tuple(int(v) for v in conn_rows[i1])
                t2 = tuple(int(v) for v in conn_rows[i2])
                if len(set(t1)) == 3 and len(set(t2)) == 3 and not set(t1) & set(t2):
                    pick = (t1, t2)
                    break
            if pick is None:
                continue
            report["samples"] += 1
            for res in (1, 2, 3, 4):
                per[res]["attempts"] += 1
                path = connect4(
                    h4, family4, index4, pick[0], pick[1],
                    inner_count=per[res]["inner"], allowed=mask,
                    budget=20_000, seed=int(rng.integers(0, 2**62)),
                )
                if path is not None:
                    per[res]["successes"] += 1
        report["per_residue"] = {f"residue_{i}": v for i, v in per.items()}
    else:
        report["note"] = "no connectable triples to sample" if not len(conn_rows) else "validation disabled"
    state.validation = report
    return state


def reserve_connect_ex(state: ReservoirState, h4, family4, index4,
                       triple_a, triple_b, residue=None, inner_count=None,
                       budget: int = DEFAULT_BUDGET):
    """connect4 with allowed = R \\ R'; successful inner vertices move into
    R' atomically.  Raises BudgetExceeded before searching when the spend
    cannot fit."""
    menu = residue_lengths(4, family4.ell)
    if (residue is None) == (inner_count is None):
        raise HypergraphError("give exactly one of residue or inner_count")
    inner = menu.for_residue(residue) if residue is not None else int(inner_count)
    available = state.budget - len(state.used)
    if inner > available:
        raise BudgetExceeded(
            f"connection needs {inner} reservoir vertices, {available} left "
            f"of budget {state.budget}",
            needed=inner, available=available,
        )
    state.calls += 1
    seed = (state.seed * 1_000_003 + state.calls) % (2**63)
    path, diag = connect4_ex(
        h4, family4, index4, triple_a, triple_b, residue=residue,
        inner_count=inner_count, allowed=state.allowed_mask(),
        budget=budget, seed=seed,
    )
    if path is not None:
        state.spend(path.vertices[3:-3])
    diag["reservoir"] = {"used": len(state.used), "budget": state.budget,
                         "budget_mode": state.budget_mode}
    return path, diag


def reserve_connect(state, h4, family4, index4, triple_a, triple_b,
                    residue=None, inner_count=None, budget: int = DEFAULT_BUDGET):
    path, _ = reserve_connect_ex(state, h4, family4, index4, triple_a,
                                 triple_b, residue, inner_count, budget)
    return path
