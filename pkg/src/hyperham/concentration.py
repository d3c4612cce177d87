"""Lower-tail concentration for weighted subset sums over binomial random
sets, plus the bounded-weight and block-sampling corollaries, each paired
with exact or Monte-Carlo tail oracles.

X = sum of w(A) over support sets A fully inside the random set V_p; the
tail bound is exp(-t^2 / 2 Delta) where Delta adds w(A) w(B) P(A u B in V_p)
over all ordered intersecting support pairs (diagonal included).  Vacuous
bounds (>= 1) are reported with a flag, never clamped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .hypercore import Hypergraph, HypergraphError

__all__ = [
    "Z95",
    "WeightSystem",
    "JansonBound",
    "janson_bound",
    "janson_exact_tail",
    "TailEstimate",
    "janson_mc_tail",
    "BoundedTailBound",
    "bounded_tail_bound",
    "bounded_tail_check",
    "BlockSamplingBound",
    "block_sampling_bound",
    "BlockSamplingReport",
    "block_sampling_check",
]

Z95 = 1.959963984540054  # two-sided 95% normal quantile, pinned

EXACT_N_CAP = 20
_MC_CHUNK = 16384


class WeightSystem:
    """Ground set {0..n-1}, inclusion probability p, and sparse nonnegative
    weights on subsets.  Duplicate subsets merge additively (equivalent for
    every quantity computed here)."""

    def __init__(self, n: int, p: float, weights):
        if n < 1:
            raise HypergraphError(f"ground set needs n >= 1, got {n}")
        p = float(p)
        if not (0.0 <= p <= 1.0) or math.isnan(p):
            raise HypergraphError(f"inclusion probability must be in [0, 1], got {p}")
        items = weights.items() if hasattr(weights, "items") else weights
        canon: dict = {}
        for subset, w in items:
            key = tuple(sorted({int(v) for v in subset}))
            if key and (key[0] < 0 or key[-1] >= n):
                raise HypergraphError(
                    f"subset {key} leaves the ground set {{0..{n - 1}}}"
                )
            w = float(w)
            if math.isnan(w) or w < 0:
                raise HypergraphError(f"weight of {key} must be >= 0, got {w}")
            if w > 0:
                canon[key] = canon.get(key, 0.0) + w
        self.n = int(n)
        self.p = p
        self.subsets: tuple = tuple(sorted(canon))
        self.weight_values: tuple = tuple(canon[s] for s in self.subsets)

    @classmethod
    def singletons(cls, n: int, p: float, weight: float = 1.0) -> "WeightSystem":
        return cls(n, p, [((v,), weight) for v in range(n)])

    @classmethod
    def on_k_sets(cls, n: int, k: int, p: float, weight=1.0) -> "WeightSystem":
        """Weight every k-subset; `weight` may be a constant or a callable
        taking the sorted tuple."""
        fn = weight if callable(weight) else (lambda a: weight)
        return cls(n, p, [(a, fn(a)) for a in combinations(range(n), k)])

    @property
    def support_size(self) -> int:
        return len(self.subsets)

    def items(self):
        return zip(self.subsets, self.weight_values)

    @property
    def expectation(self) -> float:
        p = self.p
        return float(sum(w * p ** len(a) for a, w in self.items()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "support": len(self.subsets),
            "total_weight": float(sum(self.weight_values)),
        }

    def __repr__(self) -> str:
        return (f"WeightSystem(n={self.n}, p={self.p}, "
                f"support={len(self.subsets)})")


# ------------------------------------------------------------ lower tail


@dataclass(frozen=True)
class JansonBound:
    ex: float
    delta: float
    bound: float
    t: float
    degenerate: bool  # Delta == 0: X is constant on the support scale

    def to_dict(self) -> dict:
        return {"EX": self.ex, "Delta": self.delta, "bound": self.bound,
                "t": self.t, "degenerate": self.degenerate}


def janson_bound(ws: WeightSystem, t: float) -> JansonBound:
    """exp(-t^2 / 2 Delta) for P(X <= EX - t), 0 <= t <= EX.

    EX and Delta come from exact summation over the sparse support; the
    ordered double loop includes the diagonal, so Delta >= sum of
    w(A)^2 p^|A|.
    """
    t = float(t)
    ex = ws.expectation
    if math.isnan(t) or t < 0 or t > ex + 1e-12:
        raise HypergraphError(f"t must lie in [0, EX] = [0, {ex}], got {t}")
    p = ws.p
    masks = [sum(1 << v for v in a) for a in ws.subsets]
    sizes = [len(a) for a in ws.subsets]
    w = ws.weight_values
    delta = 0.0
    for i, (mi, si, wi) in enumerate(zip(masks, sizes, w)):
        for j in range(i, len(masks)):
            inter = mi & masks[j]
            if inter:
                union = si + sizes[j] - inter.bit_count()
                term = wi * w[j] * p**union
                delta += term if i == j else 2.0 * term
    if delta == 0.0:
        return JansonBound(ex=ex, delta=0.0,
                           bound=1.0 if t == 0 else 0.0, t=t, degenerate=True)
    return JansonBound(ex=ex, delta=delta,
                       bound=math.exp(-t * t / (2.0 * delta)), t=t,
                       degenerate=False)


_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def janson_exact_tail(ws: WeightSystem, t: float) -> float:
    """P(X <= EX - t) by enumerating all 2^n outcomes (n <= 20)."""
    n = ws.n
    if n > EXACT_N_CAP:
        raise HypergraphError(
            f"exact tail enumerates 2^n outcomes; n={n} exceeds {EXACT_N_CAP}"
        )
    t = float(t)
    ex = ws.expectation
    if math.isnan(t) or t < 0 or t > ex + 1e-12:
        raise HypergraphError(f"t must lie in [0, EX] = [0, {ex}], got {t}")
    outcomes = np.arange(1 << n, dtype=np.uint32)
    sizes = _POP8[outcomes.view(np.uint8).reshape(-1, 4)].sum(axis=1)
    x_all = np.zeros(1 << n, dtype=np.float64)
    for a, w in ws.items():
        mask = np.uint32(sum(1 << v for v in a))
        x_all += w * ((outcomes & mask) == mask)
    p = ws.p
    probs = p ** sizes.astype(np.float64) * (1.0 - p) ** (n - sizes).astype(
        np.float64
    )
    return float(probs[x_all <= ex - t].sum())


@dataclass(frozen=True)
class TailEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    hits: int
    z: float = Z95

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "ci_low": self.ci_low,
                "ci_high": self.ci_high, "trials": self.trials,
                "hits": self.hits, "z": self.z}


def _wilson(hits: int, trials: int) -> tuple:
    phat = hits / trials
    denom = 1.0 + Z95 * Z95 / trials
    center = (phat + Z95 * Z95 / (2 * trials)) / denom
    half = Z95 * math.sqrt(
        phat * (1 - phat) / trials + Z95 * Z95 / (4 * trials * trials)
    ) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _chunk_seeds(seed: int, trials: int, chunk: int) -> list:
    n_chunks = (trials + chunk - 1) // chunk
    root = np.random.default_rng(seed)
    seeds = root.integers(2**62, size=n_chunks)
    out = []
    for i in range(n_chunks):
        size = min(chunk, trials - i * chunk)
        out.append((int(seeds[i]), size))
    return out


def janson_mc_tail(ws: WeightSystem, t: float, trials: int, seed: int = 0,
                   workers: int = 1) -> TailEstimate:
    """Seeded Monte-Carlo estimate of P(X <= EX - t) with a Wilson 95%
    interval.  Trials run in fixed chunks with per-chunk derived seeds and
    merge by summation, so the result is independent of worker count."""
    if trials < 1:
        raise HypergraphError(f"trials must be >= 1, got {trials}")
    t = float(t)
    ex = ws.expectation
    threshold = ex - t
    n, p = ws.n, ws.p
    cols = [np.array(a, dtype=np.intp) for a, _ in ws.items()]
    wvals = list(ws.weight_values)

    def run(args):
        chunk_seed, size = args
        rng = np.random.default_rng(chunk_seed)
        chosen = rng.random((size, n)) < p
        x = np.zeros(size, dtype=np.float64)
        for a_cols, w in zip(cols, wvals):
            x += w * chosen[:, a_cols].all(axis=1)
        return int((x <= threshold).sum())

    jobs = _chunk_seeds(seed, trials, _MC_CHUNK)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, jobs))
    else:
        hits = sum(run(j) for j in jobs)
    lo, hi = _wilson(hits, trials)
    return TailEstimate(estimate=hits / trials, ci_low=lo, ci_high=hi,
                        trials=trials, hits=hits)


# ------------------------------------------------- bounded-weight corollary


@dataclass(frozen=True)
class BoundedTailBound:
    bound: float
    vacuous: bool  # bound >= 1 carries no information; reported, not clamped
    exponent: float
    p: float
    m: int
    k: int
    xi: float

    def to_dict(self) -> dict:
        return {"bound": self.bound, "vacuous": self.vacuous,
                "exponent": self.exponent, "p": self.p, "m": self.m,
                "k": self.k, "xi": self.xi}


def bounded_tail_bound(n_ground: int, m: int, k: int, xi: float) -> BoundedTailBound:
    """Two-sided bound 3 exp(-xi^2 m / 12 k^2) for |X - EX| >= xi m^k when
    weights on k-sets lie in [0, 1] and p = m / n."""
    for name, v in (("n", n_ground), ("m", m), ("k", k)):
        if not isinstance(v, (int, np.integer)):
            raise HypergraphError(f"{name} must be an integer, got {v!r}")
    if not (n_ground >= m >= k >= 1):
        raise HypergraphError(
            f"need n >= m >= k >= 1, got n={n_ground}, m={m}, k={k}"
        )
    xi = float(xi)
    if not (0.0 < xi < 1.0):
        raise HypergraphError(f"xi must lie in (0, 1) exclusive, got {xi}")
    expo = xi * xi * m / (12.0 * k * k)
    bound = 3.0 * math.exp(-expo)
    return BoundedTailBound(bound=bound, vacuous=bound >= 1.0, exponent=expo,
                            p=m / n_ground, m=int(m), k=int(k), xi=xi)


def _as_k_weight_array(weights, n: int, k: int) -> tuple:
    """Normalize bounded k-set weights to (index matrix (s,k), value array)."""
    if isinstance(weights, np.ndarray):
        if weights.ndim != k or weights.shape != (n,) * k:
            raise HypergraphError(
                f"weight array must have shape {(n,) * k}, got {weights.shape}"
            )
        idx_cols = np.array(list(combinations(range(n), k)), dtype=np.intp)
        vals = weights[tuple(idx_cols[:, i] for i in range(k))].astype(np.float64)
    else:
        items = weights.items() if hasattr(weights, "items") else weights
        pairs = []
        for a, w in items:
            key = tuple(sorted({int(v) for v in a}))
            if len(key) != k:
                raise HypergraphError(f"weight key {a} is not a {k}-set")
            if key[0] < 0 or key[-1] >= n:
                raise HypergraphError(f"{key} leaves the ground set")
            pairs.append((key, float(w)))
        pairs.sort()
        idx_cols = np.array([a for a, _ in pairs], dtype=np.intp).reshape(-1, k)
        vals = np.array([w for _, w in pairs], dtype=np.float64)
    if vals.size and (vals.min() < 0 or vals.max() > 1):
        raise HypergraphError("bounded corollary needs weights in [0, 1]")
    return idx_cols, vals


def bounded_tail_check(weights, n: int, m: int, k: int, xi: float,
                       trials: int, seed: int = 0, workers: int = 1) -> dict:
    """Monte-Carlo harness for the bounded corollary: draws V_p with
    p = m/n, computes X exactly per trial, and compares the two-sided
    deviation frequency |X - EX| >= xi m^k against the formula bound."""
    bt = bounded_tail_bound(n, m, k, xi)
    if trials < 1:
        raise HypergraphError(f"trials must be >= 1, got {trials}")
    idx_cols, vals = _as_k_weight_array(weights, n, k)
    p = m / n
    ex = float(vals.sum() * p**k)
    dev = xi * float(m) ** k

    sym = None
    if k == 2:
        sym = np.zeros((n, n), dtype=np.float64)
        sym[idx_cols[:, 0], idx_cols[:, 1]] = vals
        sym = sym + sym.T

    def run(args):
        chunk_seed, size = args
        rng = np.random.default_rng(chunk_seed)
        chosen = rng.random((size, n)) < p
        if sym is not None:
            s = chosen.astype(np.float64)
            x = 0.5 * np.einsum("ij,ij->i", s @ sym, s)
        else:
            x = np.zeros(size, dtype=np.float64)
            step = max(1, 2_000_000 // max(1, size * k))
            for lo in range(0, len(vals), step):
                sel = chosen[:, idx_cols[lo : lo + step]].all(axis=2)
                x += sel @ vals[lo : lo + step]
        return int((np.abs(x - ex) >= dev).sum())

    jobs = _chunk_seeds(seed, trials, 4096)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            deviations = sum(pool.map(run, jobs))
    else:
        deviations = sum(run(j) for j in jobs)
    empirical = deviations / trials
    return {
        "empirical": empirical,
        "deviations": deviations,
        "trials": trials,
        "bound": bt.bound,
        "vacuous": bt.vacuous,
        "pass": bool(bt.vacuous or empirical <= bt.bound),
        "EX": ex,
        "deviation_scale": dev,
        "p": p,
    }


# ---------------------------------------------- block-sampling corollary


@dataclass(frozen=True)
class BlockSamplingBound:
    bound: float
    vacuous: bool
    lower_admissible: float  # max(8 k^2 eta, 16 k^2 / m); xi must exceed it
    m: int
    k: int
    xi: float

    def to_dict(self) -> dict:
        return {"bound": self.bound, "vacuous": self.vacuous,
                "lower_admissible": self.lower_admissible, "m": self.m,
                "k": self.k, "xi": self.xi}


def _block_formula(m: int, k: int, xi: float) -> float:
    return 12.0 * math.sqrt(m) * math.exp(-xi * xi * m / (48.0 * k ** (2 * k + 2)))


def block_sampling_bound(nu: int, m: int, k: int, xi: float,
                         eta: float | None = None) -> BlockSamplingBound:
    """12 sqrt(m) exp(-xi^2 m / 48 k^(2k+2)) for the deviation of block-union
    counts; xi must exceed max(8 k^2 eta, 16 k^2 / m) (eta side checked when
    eta is supplied)."""
    if not (nu >= m >= 1) or k < 1:
        raise HypergraphError(f"need nu >= m >= 1 and k >= 1, got nu={nu}, m={m}, k={k}")
    xi = float(xi)
    if not (0.0 < xi < 1.0):
        raise HypergraphError(f"xi must lie in (0, 1) exclusive, got {xi}")
    lower_m = 16.0 * k * k / m
    lower_eta = 8.0 * k * k * eta if eta is not None else 0.0
    lower = max(lower_m, lower_eta)
    if xi <= lower:
        side = "16k^2/m" if lower_m >= lower_eta else "8k^2*eta"
        raise HypergraphError(
            f"xi={xi} is not above the admissibility lower bound "
            f"{side}={lower:.6g} (range requires max(8k^2*eta, 16k^2/m) < xi < 1)"
        )
    bound = _block_formula(m, k, xi)
    return BlockSamplingBound(bound=bound, vacuous=bound >= 1.0,
                              lower_admissible=lower, m=int(m), k=int(k), xi=xi)


@dataclass(frozen=True)
class BlockSamplingReport:
    empirical: float
    bound: float
    vacuous: bool
    passed: bool
    admissible: bool
    violated_side: str | None
    eta: float
    d: float
    center: float
    deviation_scale: float
    trials: int
    deviations: int
    clause: str  # "a" (ordered tuple set) or "b" (hypergraph edges)
    nu: int
    block_size: int
    m: int
    k: int
    xi: float

    def to_dict(self) -> dict:
        return {
            "empirical": self.empirical, "bound": self.bound,
            "vacuous": self.vacuous, "pass": self.passed,
            "admissible": self.admissible, "violated_side": self.violated_side,
            "eta": self.eta, "d": self.d, "center": self.center,
            "deviation_scale": self.deviation_scale, "trials": self.trials,
            "deviations": self.deviations, "clause": self.clause,
            "nu": self.nu, "block_size": self.block_size, "m": self.m,
            "k": self.k, "xi": self.xi,
        }


def _normalize_partition(partition) -> tuple:
    if hasattr(partition, "blocks"):
        blocks = [tuple(int(v) for v in b) for b in partition.blocks]
        z = set(int(v) for v in getattr(partition, "leftover", ()))
        z |= set(int(v) for v in getattr(partition, "exceptional", ()))
    else:
        raw_blocks, raw_z = partition
        blocks = [tuple(int(v) for v in b) for b in raw_blocks]
        z = set(int(v) for v in raw_z)
    if not blocks:
        raise HypergraphError("partition has no blocks")
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise HypergraphError(f"blocks must share one size, got {sorted(sizes)}")
    every = [v for b in blocks for v in b] + sorted(z)
    n = max(every) + 1
    if sorted(every) != list(range(n)):
        raise HypergraphError(
            "blocks and Z must partition a contiguous ground set 0..n-1"
        )
    return blocks, z, n


def block_sampling_check(target, partition, m: int, xi: float, trials: int,
                         seed: int = 0, k: int | None = None) -> BlockSamplingReport:
    """Sample m-block unions S uniformly; count |Q ∩ S^k| (ordered-tuple
    target, clause a) or e_G(S) (hypergraph target, clause b) exactly per
    sample; report the frequency of deviations >= xi (Mm)^k (/k! for b)
    against the formula bound.

    Admissibility of xi is recorded as a flag (with the violated side named)
    rather than raised, so vacuous/out-of-range instances still produce a
    full report; structural errors (m > nu, xi outside (0,1)) raise.
    """
    blocks, z, n = _normalize_partition(partition)
    nu = len(blocks)
    big_m = len(blocks[0])
    if not (1 <= m <= nu):
        raise HypergraphError(f"need 1 <= m <= nu={nu}, got m={m}")
    xi = float(xi)
    if not (0.0 < xi < 1.0):
        raise HypergraphError(f"xi must lie in (0, 1) exclusive, got {xi}")
    if trials < 1:
        raise HypergraphError(f"trials must be >= 1, got {trials}")

    if isinstance(target, Hypergraph):
        clause = "b"
        kk = target.k
        if target.n != n:
            raise HypergraphError(
                f"hypergraph on {target.n} vertices vs partition ground {n}"
            )
        edges = target.edge_array
        d = len(target) * math.factorial(kk) / float(n) ** kk
        scale = math.factorial(kk)
    else:
        q = np.asarray(target)
        clause = "a"
        kk = q.ndim if k is None else k
        if q.ndim != kk or q.shape != (n,) * kk:
            raise HypergraphError(
                f"clause-a target must be a 0/1 array of shape {(n,) * kk}"
            )
        q = q.astype(bool)
        d = float(q.sum()) / float(n) ** kk
        scale = 1.0

    eta = max(big_m, len(z)) / n
    lower_m = 16.0 * kk * kk / m
    lower_eta = 8.0 * kk * kk * eta
    lower = max(lower_m, lower_eta)
    admissible = xi > lower
    violated = None
    if not admissible:
        violated = "16k^2/m" if lower_m >= lower_eta else "8k^2*eta"

    center = d * float(big_m * m) ** kk / scale
    dev = xi * float(big_m * m) ** kk / scale
    bound = _block_formula(m, kk, xi)

    rng = np.random.default_rng(seed)
    block_arr = np.array(blocks, dtype=np.intp)
    deviations = 0
    for _ in range(trials):
        pick = rng.choice(nu, m, replace=False)
        s = block_arr[pick].reshape(-1)
        if clause == "a":
            count = float(q[np.ix_(*([s] * kk))].sum())
        else:
            in_s = np.zeros(n, dtype=bool)
            in_s[s] = True
            count = float(in_s[edges].all(axis=1).sum())
        if abs(count - center) >= dev:
            deviations += 1
    empirical = deviations / trials
    vacuous = bound >= 1.0
    return BlockSamplingReport(
        empirical=empirical, bound=bound, vacuous=vacuous,
        passed=bool(vacuous or empirical <= bound), admissible=admissible,
        violated_side=violated, eta=eta, d=d, center=center,
        deviation_scale=dev, trials=trials, deviations=deviations,
        clause=clause, nu=nu, block_size=big_m, m=int(m), k=int(kk), xi=xi,
    )
