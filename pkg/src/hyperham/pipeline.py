"""End-to-end Hamiltonian-cycle construction for dense 4-uniform hosts.

Stage order: robust family → connectable-triple indexes → reservoir →
absorbing path → path cover → connect everything into one long path through
the reservoir → close the cycle with a residue-correct connection → absorb
the leftover vertices → revalidate.  Every stage failure is a structured
result, never an exception or an uncertified cycle.

Desk mode replaces the astronomically large full-size inner counts with the
smallest residue-correct values and sizes the steering arithmetic (extra
4-vertex blocks, dropped cover paths, closing inner count) so the final
leftover set is exactly absorbable.  Every override is echoed in reports.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .absorption import (
    AbsorbConfig,
    AbsorbError,
    BuildAbsorbingError,
    absorb,
    build_absorbing_path,
    joint_link_paths,
)
from .connectivity import (
    ConnectivityIndex4,
    FamilyBuildError,
    RobustFamily4,
    build_family4,
    connectable_triples,
    count_threshold,
    edge_tensor,
    pair_index,
    _min_pair_degree,
)
from .connector import (
    BudgetExceeded,
    ReservoirFailure,
    connect4_ex,
    residue_lengths,
    reserve_connect_ex,
    sample_reservoir,
)
from .hypercore import Hypergraph, HypergraphError
from .robust import _clause_check
from .tightpaths import (
    TightCycle,
    TightPath,
    TightWalk,
    greedy_path_cover,
    validate,
)

__all__ = [
    "PipelineConfig",
    "BlockPartition",
    "make_block_partition",
    "CoverReport",
    "path_cover",
    "SocietyReport",
    "society_stats",
    "PipelineResult",
    "PipelineFailure",
    "find_hamiltonian_absorption",
    "validate_result",
    "MIN_N",
]

MIN_N = 24  # smallest host the desk arithmetic supports end to end


# ------------------------------------------------------------------- config


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline constants.

    The full-size hierarchy is alpha >> beta, 1/ell >> zeta_star >>
    theta_star >> zeta_star_star >> theta_star_star >> 1/M >> 1/n; desk mode
    keeps the ordering zeta_star > zeta_star_star but compresses everything
    into ranges that bite at n < 100.  None-valued knobs mean "use the
    full-size value" (menu inner counts, the mu formula, solver-chosen
    steering).
    """

    alpha: float = 0.15
    mu: float | None = None  # None: alpha^3 / 18
    beta: float = 1e-6
    ell: int = 3
    zeta_star: float = 0.1
    zeta_star_star: float = 0.05
    theta_star: float = 0.4
    theta_star_star: float = 0.3
    m_vertices: int = 7  # M, cover path size
    n_absorbers: int = 0
    extra_blocks: int | None = None  # None: steering solver decides
    intermediate_inner: int | None = 1  # None: residue-1 menu value
    join_inner: int | None = 2  # None: residue-2 menu value
    connect_budget: int = 250_000
    cover_budget: int = 2_000_000
    absorber_budget: int = 80_000
    society_samples: int = 0
    seed: int = 0
    mode: str = "desk"

    def __post_init__(self):
        if self.mode not in ("desk", "asymptotic"):
            raise HypergraphError(f"mode must be desk or asymptotic, got {self.mode!r}")
        if not (0 < self.alpha < 1 / 3):
            raise HypergraphError(f"alpha must be in (0, 1/3), got {self.alpha}")
        if self.beta <= 0:
            raise HypergraphError("beta must be positive")
        if self.mu is not None and self.mu <= 0:
            raise HypergraphError("mu must be positive when given")
        if self.ell < 3 or self.ell % 2 == 0:
            raise HypergraphError(f"ell must be odd and >= 3, got {self.ell}")
        for name in ("zeta_star", "zeta_star_star", "theta_star", "theta_star_star"):
            v = getattr(self, name)
            if not (0 < v < 1):
                raise HypergraphError(f"{name} must be in (0, 1), got {v}")
        if self.zeta_star_star >= self.zeta_star:
            raise HypergraphError(
                "zeta_star_star must be smaller than zeta_star "
                "(connectable sets must nest)"
            )
        if self.m_vertices < 7 or self.m_vertices % 4 != 3:
            raise HypergraphError(
                f"M must be >= 7 and congruent to 3 mod 4, got {self.m_vertices}"
            )
        if self.n_absorbers < 0:
            raise HypergraphError("n_absorbers must be nonnegative")
        if self.extra_blocks is not None and self.extra_blocks < 0:
            raise HypergraphError("extra_blocks must be nonnegative when given")
        if self.intermediate_inner is not None and (
            self.intermediate_inner < 1 or self.intermediate_inner % 4 != 1
        ):
            raise HypergraphError(
                "intermediate_inner must be 1 mod 4 (path-length parity), "
                f"got {self.intermediate_inner}"
            )
        for name in ("connect_budget", "cover_budget", "absorber_budget"):
            if getattr(self, name) <= 0:
                raise HypergraphError(f"{name} must be positive")
        if self.society_samples < 0:
            raise HypergraphError("society_samples must be nonnegative")

    @classmethod
    def desk_default(cls, **overrides) -> "PipelineConfig":
        return cls(**overrides)

    @classmethod
    def asymptotic_default(cls, **overrides) -> "PipelineConfig":
        base = dict(
            mode="asymptotic",
            intermediate_inner=None,
            join_inner=None,
            extra_blocks=0,
        )
        base.update(overrides)
        return cls(**base)

    @property
    def effective_mu(self) -> float:
        return self.alpha**3 / 18 if self.mu is None else self.mu

    def to_dict(self) -> dict:
        menu = residue_lengths(4, self.ell)
        return {
            "alpha": self.alpha,
            "mu": self.effective_mu,
            "mu_is_formula": self.mu is None,
            "beta": self.beta,
            "ell": self.ell,
            "zeta_star": self.zeta_star,
            "zeta_star_star": self.zeta_star_star,
            "theta_star": self.theta_star,
            "theta_star_star": self.theta_star_star,
            "m_vertices": self.m_vertices,
            "n_absorbers": self.n_absorbers,
            "extra_blocks": self.extra_blocks,
            "intermediate_inner": self.intermediate_inner,
            "join_inner": self.join_inner,
            "full_size_inner_menu": list(menu.inner_counts),
            "menu_deviation": self.mode == "desk",
            "connect_budget": self.connect_budget,
            "cover_budget": self.cover_budget,
            "absorber_budget": self.absorber_budget,
            "society_samples": self.society_samples,
            "seed": self.seed,
            "mode": self.mode,
        }


# --------------------------------------------------------------- partitions


@dataclass(frozen=True)
class BlockPartition:
    """Equal-size blocks, a short leftover, and the up-front exceptional set."""

    blocks: tuple  # tuples of vertices, each the same size
    leftover: tuple
    exceptional: frozenset

    def __post_init__(self):
        sizes = {len(b) for b in self.blocks}
        if len(sizes) > 1:
            raise HypergraphError(f"blocks must share one size, got {sorted(sizes)}")
        if self.blocks and len(self.leftover) >= len(self.blocks[0]):
            raise HypergraphError("leftover must be shorter than a block")
        seen: set = set()
        for group in (*self.blocks, self.leftover, self.exceptional):
            for v in group:
                if v in seen:
                    raise HypergraphError(f"vertex {v} appears in two groups")
                seen.add(v)

    @property
    def nu(self) -> int:
        return len(self.blocks)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0


def make_block_partition(paths, pool, exceptional, m_vertices: int,
                         seed: int = 0) -> BlockPartition:
    """Blocks from cover-path vertex sets plus M-chunks of the shuffled pool;
    whatever remains (< M) is the leftover."""
    blocks = []
    for p in paths:
        vs = tuple(int(v) for v in (p.vertices if isinstance(p, TightWalk) else p))
        if len(vs) != m_vertices:
            raise HypergraphError(
                f"cover path has {len(vs)} vertices, blocks need {m_vertices}"
            )
        blocks.append(vs)
    rng = np.random.default_rng(seed)
    rest = sorted(int(v) for v in pool)
    rest = [rest[i] for i in rng.permutation(len(rest))]
    while len(rest) >= m_vertices:
        blocks.append(tuple(sorted(rest[:m_vertices])))
        rest = rest[m_vertices:]
    return BlockPartition(
        blocks=tuple(blocks),
        leftover=tuple(sorted(rest)),
        exceptional=frozenset(int(v) for v in exceptional),
    )


# --------------------------------------------------------------- path cover


@dataclass(frozen=True)
class CoverReport:
    paths: tuple
    uncovered: frozenset
    uncovered_fraction: float  # relative to the eligible (non-excluded) set
    maximal_certified: bool
    augmented: int  # paths contributed by the link-skeleton fallback
    expansions: int


def path_cover(
    h4: Hypergraph,
    family4: RobustFamily4,
    index_ss: ConnectivityIndex4,
    x_excluded,
    config: PipelineConfig,
) -> CoverReport:
    """Disjoint M-vertex tight paths avoiding X, ends connectable at the
    weaker (star-star) threshold, greedily maximal.

    The kernel search is exhaustive (certified) unless the budget interrupts
    it; in that case, and for M = 7, a fallback builds path skeletons inside
    a sampled vertex's link and lifts them by inserting the vertex at the
    fourth position.
    """
    m = config.m_vertices
    if m < 7:
        raise HypergraphError(f"cover paths need at least 7 vertices, got {m}")
    excluded = set(int(v) for v in x_excluded)
    end_ok = index_ss.conn.reshape(-1).astype(np.uint8)
    base = greedy_path_cover(h4, excluded, m, end_ok, budget=config.cover_budget)
    paths = list(base.paths)
    free = set(base.uncovered)
    augmented = 0

    if m == 7 and not base.maximal_certified and len(free) >= m:
        rng = np.random.default_rng(config.seed ^ 0x5EED)
        stalls = 0
        while len(free) >= m and stalls < 24:
            u = int(rng.choice(sorted(free)))
            forbidden = set(range(h4.n)) - (free - {u})
            hits = joint_link_paths(
                h4, None, u, index_ss, limit=1, forbidden=forbidden,
                seed=int(rng.integers(2**62)), budget=4000,
            )
            if not hits:
                stalls += 1
                continue
            b = hits[0]
            lifted = b[:3] + (u,) + b[3:]
            cert = validate(list(lifted), h4, kind="path")
            assert cert.ok, f"augmented cover path invalid: {cert}"
            paths.append(TightPath(4, lifted))
            free -= set(lifted)
            augmented += 1

    eligible = h4.n - len(excluded)
    return CoverReport(
        paths=tuple(paths),
        uncovered=frozenset(free),
        uncovered_fraction=len(free) / eligible if eligible else 0.0,
        maximal_certified=base.maximal_certified,
        augmented=augmented,
        expansions=base.expansions,
    )


# ------------------------------------------------------------- societies


@dataclass(frozen=True)
class SocietyReport:
    samples: int
    useful: int
    histogram: dict  # first-failing-clause accounting; keys pass/i/ii/iii
    m: int
    block_size: int
    vertex: int

    @property
    def fraction_useful(self) -> float | None:
        return self.useful / self.samples if self.samples else None

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "useful": self.useful,
            "fraction_useful": self.fraction_useful,
            "histogram": dict(self.histogram),
            "m": self.m,
            "block_size": self.block_size,
            "vertex": self.vertex,
        }


def _society_clause_i(e3u_sub: np.ndarray, alpha: float) -> bool:
    s = e3u_sub.shape[0]
    degrees = e3u_sub.sum(axis=(1, 2)) // 2
    thr = (Fraction(5, 9) + Fraction(str(alpha)) / 4) * s * s / 2
    return Fraction(int(degrees.min())) >= thr


def _society_clause_ii(h4, family4, u: int, s_vertices: np.ndarray,
                       alpha: float, beta: float, ell: int) -> bool:
    e4 = edge_tensor(h4)
    for x in s_vertices:
        x = int(x)
        link = e4[u, x][np.ix_(s_vertices, s_vertices)].astype(np.uint8)
        key = (min(u, x), max(u, x))
        cert_vertices = family4.certificates[key].vertices
        mask = np.isin(s_vertices, cert_vertices)
        failing, _, _, _ = _clause_check(
            link, mask, alpha / 4, beta / 2, ell, alpha / 16
        )
        if failing is not None:
            return False
    return True


def _society_clause_iii(h4, family4, index_ss, u: int, s_vertices: np.ndarray,
                        zeta_ss: float) -> bool:
    n = h4.n
    e4 = edge_tensor(h4)
    s = len(s_vertices)
    rows = np.array([pair_index(u, int(w), n) for w in s_vertices])
    induced = family4.r_adj[rows][:, s_vertices][:, :, s_vertices]
    counts = induced.sum(axis=0, dtype=np.int32)
    conn_ind = counts >= count_threshold(zeta_ss, s)
    e3u_sub = e4[u][np.ix_(s_vertices, s_vertices, s_vertices)]
    conn_host = index_ss.conn[np.ix_(s_vertices, s_vertices, s_vertices)]
    bridges = e3u_sub & conn_ind[:, :, None] & conn_ind[None, :, :] & conn_host
    need = Fraction(str(zeta_ss)) * s**3
    return Fraction(int(bridges.sum())) >= need


def society_stats(
    h4: Hypergraph,
    family4: RobustFamily4,
    u: int,
    partition: BlockPartition,
    m: int,
    samples: int,
    seed: int,
    config: PipelineConfig,
    index_ss: ConnectivityIndex4 | None = None,
) -> SocietyReport:
    """Sample m-block societies and check the three usefulness clauses
    exactly on each: induced minimum vertex degree, re-verified robust family
    at the (alpha/4, beta/2, alpha/16) parameters, and the connectable-bridge
    triple count against zeta** (mM)^3.  First-failing-clause histogram."""
    if m > partition.nu:
        raise HypergraphError(
            f"societies take {m} blocks but the partition has {partition.nu}"
        )
    u = int(u)
    pool = [b for b in partition.blocks if u not in b]
    if m > len(pool):
        raise HypergraphError(
            f"only {len(pool)} blocks avoid vertex {u}, need {m}"
        )
    if index_ss is None:
        index_ss = connectable_triples(family4, config.zeta_star_star)
    rng = np.random.default_rng(seed)
    hist = {"pass": 0, "i": 0, "ii": 0, "iii": 0}
    for _ in range(samples):
        chosen = rng.choice(len(pool), m, replace=False)
        s_vertices = np.array(sorted(v for bi in chosen for v in pool[bi]))
        e3u_sub = edge_tensor(h4)[u][np.ix_(s_vertices, s_vertices, s_vertices)]
        if not _society_clause_i(e3u_sub, config.alpha):
            hist["i"] += 1
            continue
        if not _society_clause_ii(h4, family4, u, s_vertices, config.alpha,
                                  config.beta, config.ell):
            hist["ii"] += 1
            continue
        if not _society_clause_iii(h4, family4, index_ss, u, s_vertices,
                                   config.zeta_star_star):
            hist["iii"] += 1
            continue
        hist["pass"] += 1
    return SocietyReport(
        samples=samples,
        useful=hist["pass"],
        histogram=hist,
        m=m,
        block_size=partition.block_size,
        vertex=u,
    )


# ----------------------------------------------------------- run artifacts


def _py(obj):
    """Recursively coerce numpy scalars/containers to plain Python for JSON."""
    if isinstance(obj, dict):
        return {str(k): _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_py(v) for v in obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _cycle_digest(vertices) -> str:
    """Rotation/direction-canonical digest of a cyclic vertex sequence."""
    vs = [int(v) for v in vertices]
    pivot = vs.index(min(vs))
    fwd = vs[pivot:] + vs[:pivot]
    rev = [vs[pivot]] + list(reversed(vs[pivot + 1 :] + vs[:pivot]))
    canon = min(fwd, rev)
    raw = ",".join(str(v) for v in canon).encode()
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def _report_lines(config: dict, stages, timings: dict, result: dict) -> list:
    lines = [json.dumps({"event": "config", **_py(config)}, sort_keys=True)]
    for st in stages:
        lines.append(json.dumps({"event": "stage", **_py(st)}, sort_keys=True))
    lines.append(json.dumps(
        {"event": "timings", "ms": {k: round(v, 3) for k, v in timings.items()}},
        sort_keys=True,
    ))
    lines.append(json.dumps({"event": "result", **_py(result)}, sort_keys=True))
    return lines


@dataclass(frozen=True)
class PipelineResult:
    cycle: TightCycle
    stages: tuple
    timings_ms: dict = field(repr=False)
    config: dict
    n: int

    @property
    def ok(self) -> bool:
        return True

    @property
    def digest(self) -> str:
        return _cycle_digest(self.cycle.vertices)

    def report_lines(self) -> list:
        return _report_lines(
            self.config, self.stages, self.timings_ms,
            {"ok": True, "n": self.n, "cycle_length": len(self.cycle.vertices),
             "cycle_digest": self.digest},
        )


@dataclass(frozen=True)
class PipelineFailure:
    stage: str
    diagnostics: dict
    stages: tuple
    timings_ms: dict = field(repr=False)
    config: dict
    n: int
    cycle: None = None

    @property
    def ok(self) -> bool:
        return False

    def report_lines(self) -> list:
        return _report_lines(
            self.config, self.stages, self.timings_ms,
            {"ok": False, "n": self.n, "stage": self.stage,
             "diagnostics": _py(self.diagnostics)},
        )


def validate_result(h4: Hypergraph, cycle) -> bool:
    """True iff the sequence visits every vertex of the host exactly once and
    all cyclic windows are edges."""
    vs = cycle.vertices if isinstance(cycle, TightWalk) else tuple(
        int(v) for v in cycle
    )
    if len(vs) != h4.n or len(set(vs)) != h4.n:
        return False
    return validate(list(vs), h4, kind="cycle").ok


# ------------------------------------------------------------ orchestration


def _absorber_base_size(n_absorbers: int, join_inner: int) -> int:
    if n_absorbers == 0:
        return 7
    return 35 * n_absorbers + (5 * n_absorbers - 1) * join_inner


def _predict_leftover(n, r, a_size, m, i1, n_abs):
    free = n - r - a_size
    if free < 0:
        return None
    c = free // m
    j = free % m
    c_used = min(c, r // i1 if i1 else c)
    return r - c_used * i1 + j + (c - c_used) * m


def _leftover_quality(leftover: int, n_abs: int) -> int:
    """Smaller is better: 0 means some closing inner lands in the easy
    window, 1 means merely feasible, 2 means brittle or impossible."""
    if leftover is None or leftover < 1:
        return 2
    best = 2
    for q in range(min(n_abs, leftover // 4) + 1):
        closing = leftover - 4 * q
        if closing < 1:
            continue
        if 3 <= closing <= 14:
            return 0
        best = min(best, 1)
    return best


def _steering_extra(n, r, cfg: PipelineConfig, join_inner: int, cap: int) -> int:
    """Pick the extra-block count whose predicted leftover closes most
    comfortably, preferring fewer blocks on ties."""
    i1 = cfg.intermediate_inner or residue_lengths(4, cfg.ell).for_residue(1)
    base = _absorber_base_size(cfg.n_absorbers, join_inner)
    best_extra, best_quality = 0, 3
    for extra in range(0, 8):
        a_size = base + 4 * extra
        if a_size > cap:
            break
        left = _predict_leftover(n, r, a_size, cfg.m_vertices, i1, cfg.n_absorbers)
        quality = _leftover_quality(left, cfg.n_absorbers)
        if quality < best_quality:
            best_extra, best_quality = extra, quality
        if best_quality == 0:
            break
    return best_extra


def _plan_drops(n, r_left, a_size, piece_sizes, i1, n_abs, max_drop=3):
    """How many trailing cover paths to leave out of the long path so the
    closing arithmetic is comfortable.  Returns (drop, predicted leftover)."""
    total = sum(piece_sizes)
    best = (0, None, 3)
    for drop in range(0, min(max_drop, len(piece_sizes)) + 1):
        kept = len(piece_sizes) - drop
        if kept * i1 > r_left:
            continue
        t_size = a_size + sum(piece_sizes[:kept]) + kept * i1
        leftover = n - t_size
        quality = _leftover_quality(leftover, n_abs)
        if quality < best[2]:
            best = (drop, leftover, quality)
        if quality == 0:
            break
    return best[0], best[1]


def find_hamiltonian_absorption(h4: Hypergraph, config: PipelineConfig | None = None):
    """Run the full construction; returns PipelineResult or PipelineFailure.

    A returned cycle is always validator-certified and spans the host's
    vertex set exactly; every other outcome is a Failure naming its stage.
    """
    cfg = config if config is not None else PipelineConfig.desk_default()
    n = h4.n
    stages: list = []
    timings: dict = {}
    cfg_echo = cfg.to_dict()
    rng = np.random.default_rng(cfg.seed)

    def record(name, ok, **details):
        stages.append({"name": name, "ok": bool(ok), **details})

    def fail(stage, **diagnostics):
        record(stage, False, **diagnostics)
        return PipelineFailure(
            stage=stage, diagnostics=diagnostics, stages=tuple(stages),
            timings_ms=timings, config=cfg_echo, n=n,
        )

    def timed(name, fn):
        t = time.perf_counter()
        out = fn()
        timings[name] = (time.perf_counter() - t) * 1000.0
        return out

    # -- preflight
    t = time.perf_counter()
    if h4.k != 4:
        timings["preflight"] = (time.perf_counter() - t) * 1000.0
        return fail("preflight", reason=f"host must be 4-uniform, got k={h4.k}")
    if n < MIN_N:
        timings["preflight"] = (time.perf_counter() - t) * 1000.0
        return fail("preflight", reason=f"n={n} below the minimum {MIN_N}")
    delta2 = _min_pair_degree(h4)
    degree_need = (Fraction(5, 9) + Fraction(str(cfg.alpha))) * n * n / 2
    timings["preflight"] = (time.perf_counter() - t) * 1000.0
    record("preflight", True, n=n, min_pair_degree=delta2,
           degree_threshold=float(degree_need),
           degree_condition_met=bool(Fraction(delta2) >= degree_need))

    # -- robust family
    try:
        fam = timed("family", lambda: build_family4(
            h4, cfg.alpha, cfg.beta, cfg.ell, mu=cfg.mu, mode="desk"))
    except FamilyBuildError as exc:
        timings.setdefault("family", 0.0)
        return fail("family", reason=str(exc), location=_py(exc.location))
    record("family", True, pairs=len(fam.certificates), ell=fam.ell)

    # -- connectability indexes
    def build_indexes():
        return (connectable_triples(fam, cfg.zeta_star),
                connectable_triples(fam, cfg.zeta_star_star))

    idx_star, idx_ss = timed("index", build_indexes)
    conn_frac = float(idx_ss.conn.mean())
    record("index", True, zeta_star=cfg.zeta_star,
           zeta_star_star=cfg.zeta_star_star,
           connectable_fraction_ss=round(conn_frac, 6))
    if not idx_ss.conn.any():
        return fail("index", reason="no connectable triples at zeta_star_star")

    # -- reservoir
    tss = None if cfg.mode == "desk" else cfg.theta_star_star
    try:
        res = timed("reservoir", lambda: sample_reservoir(
            h4, fam, cfg.theta_star, cfg.zeta_star_star,
            seed=int(rng.integers(2**62)), validation_samples=4,
            index4=idx_ss, theta_star_star=tss, ell=cfg.ell))
    except ReservoirFailure as exc:
        timings.setdefault("reservoir", 0.0)
        return fail("reservoir", reason=str(exc))
    record("reservoir", True, size=len(res.reservoir), budget=res.budget,
           budget_mode=res.budget_mode)

    # -- absorbing path (with steering)
    join_inner = (residue_lengths(4, cfg.ell).for_residue(2)
                  if cfg.join_inner is None else cfg.join_inner)
    cap = int(Fraction(str(cfg.theta_star)) * n)
    extra = (cfg.extra_blocks if cfg.extra_blocks is not None
             else _steering_extra(n, len(res.reservoir), cfg, join_inner, cap))
    abs_cfg = AbsorbConfig(
        n_absorbers=cfg.n_absorbers,
        extra_blocks=extra,
        join_inner=cfg.join_inner,
        budget=cfg.absorber_budget,
        seed=int(rng.integers(2**62)),
    )
    try:
        ap = timed("absorbing-path", lambda: build_absorbing_path(
            h4, fam, idx_star, res, abs_cfg))
    except BuildAbsorbingError as exc:
        timings.setdefault("absorbing-path", 0.0)
        return fail("absorbing-path", sub_stage=exc.stage,
                    diagnostics=_py(exc.diagnostics), extra_blocks=extra)
    record("absorbing-path", True, size=len(ap.path.vertices),
           absorbers=len(ap.absorbers), extra_blocks=extra,
           joins=[j["inner"] for j in ap.joins])

    # -- path cover
    x_set = set(res.reservoir) | set(ap.path.vertices)
    cov = timed("cover", lambda: path_cover(h4, fam, idx_ss, x_set, cfg))
    record("cover", True, paths=len(cov.paths),
           uncovered=len(cov.uncovered),
           uncovered_fraction=round(cov.uncovered_fraction, 6),
           maximal_certified=cov.maximal_certified, augmented=cov.augmented)

    # -- society diagnostics (optional)
    if cfg.society_samples > 0 and cov.paths:
        def society():
            part = make_block_partition(
                cov.paths, cov.uncovered, x_set, cfg.m_vertices,
                seed=cfg.seed)
            probe_pool = sorted(cov.uncovered) or sorted(res.reservoir)
            if not probe_pool or not part.blocks:
                return None
            u = probe_pool[0]
            avail = sum(1 for b in part.blocks if u not in b)
            m_soc = min(2, avail)
            if m_soc == 0:
                return None
            return society_stats(h4, fam, u, part, m_soc,
                                 cfg.society_samples, cfg.seed, cfg,
                                 index_ss=idx_ss)
        soc = timed("society", society)
        record("society", True,
               **(soc.to_dict() if soc else {"skipped": True}))

    # -- connect into one long path T
    t = time.perf_counter()
    i1 = cfg.intermediate_inner
    i1_resolved = (i1 if i1 is not None
                   else residue_lengths(4, cfg.ell).for_residue(1))
    piece_sizes = [len(p.vertices) for p in cov.paths]
    drop, predicted_left = _plan_drops(
        n, min(len(res.remaining), res.budget - len(res.used)),
        len(ap.path.vertices), piece_sizes, i1_resolved, len(ap.absorbers))
    pending = list(cov.paths[: len(cov.paths) - drop])
    t_vertices = list(ap.path.vertices)
    connections = []
    while pending:
        tail = tuple(t_vertices[-3:])
        hooked = None
        for pi, piece in enumerate(pending):
            for direction, vs in (("fwd", piece.vertices),
                                  ("rev", piece.vertices[::-1])):
                head = vs[:3]
                if not idx_ss.conn[head]:
                    continue
                try:
                    path, cdiag = reserve_connect_ex(
                        res, h4, fam, idx_ss, tail, head,
                        inner_count=i1 if i1 is not None else None,
                        residue=None if i1 is not None else 1,
                        budget=cfg.connect_budget)
                except BudgetExceeded:
                    path, cdiag = None, {"budget_exceeded": True}
                if path is not None:
                    hooked = (pi, direction, path, cdiag)
                    break
            if hooked:
                break
        if hooked is None:
            timings["connect"] = (time.perf_counter() - t) * 1000.0
            return fail("connect", reason="no cover path could be attached",
                        attached=len(connections), pending=len(pending),
                        reservoir_left=res.remaining)
        pi, direction, path, cdiag = hooked
        piece = pending.pop(pi)
        vs = piece.vertices if direction == "fwd" else piece.vertices[::-1]
        t_vertices.extend(path.vertices[3:-3])
        t_vertices.extend(vs)
        connections.append({"inner": len(path.vertices) - 6,
                            "direction": direction,
                            "strategy": cdiag.get("strategy")})
    cert = validate(t_vertices, h4, kind="path")
    timings["connect"] = (time.perf_counter() - t) * 1000.0
    if not cert.ok:
        return fail("connect", reason=f"assembled path failed validation: {cert}")
    record("connect", True, pieces=len(connections) + 1,
           dropped_cover_paths=drop, connections=connections,
           t_size=len(t_vertices), predicted_leftover=predicted_left,
           reservoir_used=len(res.used))

    # -- close the cycle
    t = time.perf_counter()
    leftover = sorted(set(range(n)) - set(t_vertices))
    big_l = len(leftover)
    residue_needed = (n - len(t_vertices)) % 4
    candidates = []
    if cfg.mode == "desk":
        for q in range(min(len(ap.absorbers), big_l // 4), -1, -1):
            closing = big_l - 4 * q
            if closing >= 1:
                candidates.append((closing, q))
        candidates.sort(key=lambda cq: (abs(cq[0] - 7), -cq[1]))
        if not candidates and big_l == 0:
            candidates = [(0, 0)]
    else:
        menu = residue_lengths(4, cfg.ell)
        i_res = residue_needed if residue_needed else 4
        closing = menu.for_residue(i_res)
        candidates = [(closing, (big_l - closing) // 4)]
    allowed = np.zeros(n, dtype=bool)
    allowed[leftover] = True
    head = tuple(t_vertices[:3])
    tail = tuple(t_vertices[-3:])
    closing_path = None
    closing_diag = []
    chosen = None
    for closing, q in candidates:
        assert (closing - residue_needed) % 4 == 0, "closing residue drifted"
        path, cdiag = connect4_ex(
            h4, fam, idx_ss, tail, head, inner_count=closing,
            allowed=allowed, budget=cfg.connect_budget,
            seed=int(rng.integers(2**62)))
        closing_diag.append({"inner": closing, "z_quads": q,
                             "found": path is not None,
                             "nodes": cdiag.get("nodes")})
        if path is not None:
            closing_path = path
            chosen = (closing, q)
            break
    timings["closing"] = (time.perf_counter() - t) * 1000.0
    if closing_path is None:
        return fail("closing", reason="no residue-correct closing connection",
                    leftover=big_l, residue=residue_needed,
                    attempts=closing_diag)
    cycle_vertices = t_vertices + list(closing_path.vertices[3:-3])
    record("closing", True, inner=chosen[0], attempts=closing_diag,
           cycle_size=len(cycle_vertices))

    # -- absorb the leftover set Z
    t = time.perf_counter()
    z_set = sorted(set(range(n)) - set(cycle_vertices))
    z_bound = 2 * Fraction(str(cfg.theta_star)) ** 2 * n
    if len(z_set) % 4 != 0:
        timings["absorb"] = (time.perf_counter() - t) * 1000.0
        return fail("absorb", reason="leftover size not divisible by 4",
                    z_size=len(z_set))
    if Fraction(len(z_set)) > z_bound:
        timings["absorb"] = (time.perf_counter() - t) * 1000.0
        return fail("absorb", reason="leftover exceeds 2 theta*^2 n",
                    z_size=len(z_set), bound=float(z_bound))
    if z_set:
        try:
            q_path = absorb(ap, z_set)
        except AbsorbError as exc:
            timings["absorb"] = (time.perf_counter() - t) * 1000.0
            return fail("absorb", reason=str(exc), z_size=len(z_set))
        a_len = len(ap.path.vertices)
        assert tuple(cycle_vertices[:a_len]) == ap.path.vertices, (
            "absorbing path must sit at the front of the cycle")
        cycle_vertices = list(q_path.vertices) + cycle_vertices[a_len:]
    timings["absorb"] = (time.perf_counter() - t) * 1000.0
    record("absorb", True, z_size=len(z_set), z_bound=float(z_bound))

    # -- final validation
    cycle = TightCycle(4, tuple(cycle_vertices))
    valid = timed("validate", lambda: validate_result(h4, cycle))
    if not valid:
        return fail("validate", reason="final cycle failed certification")
    record("validate", True, length=len(cycle.vertices))
    return PipelineResult(
        cycle=cycle, stages=tuple(stages), timings_ms=timings,
        config=cfg_echo, n=n,
    )
