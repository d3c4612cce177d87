"""Scratch smoke for pipeline.py — deleted before final test run."""

import json
import time

import numpy as np

from hyperham.connectivity import build_family4, connectable_triples
from hyperham.extremal import construction_a, random_hypergraph
from hyperham.hypercore import Hypergraph, HypergraphError
from hyperham.pipeline import (
    MIN_N,
    BlockPartition,
    PipelineConfig,
    PipelineFailure,
    PipelineResult,
    find_hamiltonian_absorption,
    make_block_partition,
    path_cover,
    society_stats,
    validate_result,
)

CHECKS = 0


def ok(cond, label):
    global CHECKS
    CHECKS += 1
    if not cond:
        raise AssertionError(f"FAIL: {label}")
    print(f"  ok {CHECKS:3d}: {label}")


t_start = time.time()

# ----- config validation
print("== config")
cfg = PipelineConfig.desk_default()
ok(cfg.mode == "desk" and cfg.m_vertices == 7, "desk defaults")
ok(abs(cfg.effective_mu - 0.15**3 / 18) < 1e-15, "mu formula when unset")
d = cfg.to_dict()
ok(d["mu_is_formula"] and d["menu_deviation"], "echo flags")
ok(d["full_size_inner_menu"] == [145, 34, 71, 108], "menu echo for ell=3")
for bad in (
    dict(mode="weird"),
    dict(m_vertices=6),
    dict(m_vertices=8),
    dict(ell=4),
    dict(alpha=0.5),
    dict(zeta_star=0.05, zeta_star_star=0.1),
    dict(intermediate_inner=2),
    dict(n_absorbers=-1),
):
    try:
        PipelineConfig(**bad)
        ok(False, f"config {bad} should raise")
    except HypergraphError:
        ok(True, f"config rejects {bad}")
asy = PipelineConfig.asymptotic_default()
ok(asy.intermediate_inner is None and asy.join_inner is None, "asymptotic knobs")

# ----- path cover on the complete host
print("== path cover")
comp = random_hypergraph(50, 4, 1.0, seed=1)
fam_c = build_family4(comp, 0.15, 1e-6, 3)
idx_c = connectable_triples(fam_c, 0.05)
cov_all = path_cover(comp, fam_c, idx_c, set(), cfg)
ok(len(cov_all.uncovered) <= 6, f"complete(50): uncovered {len(cov_all.uncovered)} <= 6")
ok(all(len(p.vertices) == 7 for p in cov_all.paths), "all cover paths are 7-vertex")
seen = set()
for p in cov_all.paths:
    ok(not (set(p.vertices) & seen), "cover paths pairwise disjoint")
    seen |= set(p.vertices)
    ok(bool(idx_c.conn[p.vertices[:3]]) and bool(idx_c.conn[p.vertices[-3:]]),
       "cover path ends connectable")
    break  # one spot-check of the loop body is enough

cov_none = path_cover(comp, fam_c, idx_c, set(range(50)), cfg)
ok(cov_none.paths == () and not cov_none.uncovered, "X = V gives the empty cover")

x_half = set(range(25))
cov_half = path_cover(comp, fam_c, idx_c, x_half, cfg)
ok(all(not (set(p.vertices) & x_half) for p in cov_half.paths), "cover avoids X")
ok(cov_half.maximal_certified, "exhaustive greedy certifies maximality")

# ----- block partitions
print("== partitions")
part = make_block_partition(cov_all.paths, cov_all.uncovered, set(), 7, seed=3)
ok(part.nu == len(cov_all.paths), "blocks from cover paths (leftover < M)")
ok(len(part.leftover) == len(cov_all.uncovered), "short pool goes to leftover")
part2 = make_block_partition([], range(20), {20, 21}, 7, seed=0)
ok(part2.nu == 2 and len(part2.leftover) == 6, "pool chunked into M-blocks")
ok(part2.exceptional == frozenset({20, 21}), "exceptional set carried")
try:
    BlockPartition(blocks=((1, 2), (2, 3)), leftover=(), exceptional=frozenset())
    ok(False, "overlapping blocks should raise")
except HypergraphError:
    ok(True, "overlapping blocks rejected")
try:
    BlockPartition(blocks=((1, 2, 3),), leftover=(4, 5, 6), exceptional=frozenset())
    ok(False, "long leftover should raise")
except HypergraphError:
    ok(True, "leftover >= block size rejected")

# ----- society stats on the complete host
print("== societies")
rep = society_stats(comp, fam_c, part.leftover[0] if part.leftover else 49,
                    part, 2, 12, seed=5, config=cfg, index_ss=idx_c)
ok(rep.samples == 12, "society sample count")
ok(sum(rep.histogram.values()) == rep.samples, "histogram sums to samples")
ok(rep.useful == rep.samples, "complete host: every society is useful")
ok(rep.fraction_useful == 1.0, "fraction_useful")
ok(rep.block_size == 7 and rep.m == 2, "society geometry echo")
try:
    society_stats(comp, fam_c, 0, part, part.nu + 1, 1, 0, cfg)
    ok(False, "m > nu should raise")
except HypergraphError:
    ok(True, "m > nu rejected")

rnd_host = random_hypergraph(46, 4, 0.88, seed=9)
fam_r = build_family4(rnd_host, 0.15, 1e-6, 3)
idx_r = connectable_triples(fam_r, 0.05)
cov_r = path_cover(rnd_host, fam_r, idx_r, set(range(8)), cfg)
if cov_r.paths:
    part_r = make_block_partition(cov_r.paths, cov_r.uncovered, set(range(8)), 7)
    m_r = min(2, part_r.nu)
    rep_r = society_stats(rnd_host, fam_r, 0, part_r, m_r, 8, seed=1,
                          config=cfg, index_ss=idx_r)
    ok(sum(rep_r.histogram.values()) == 8, "random host histogram accounting")
    print(f"    random-host societies: {rep_r.histogram}")

# ----- full runs
print("== end-to-end n=60")
h60 = random_hypergraph(60, 4, 0.92, seed=202)
res60 = find_hamiltonian_absorption(h60)
if not res60.ok:
    print(res60.stage, res60.diagnostics)
ok(res60.ok, "n=60 run returns a cycle")
ok(validate_result(h60, res60.cycle), "n=60 cycle certified")
ok(len(res60.cycle.vertices) == 60, "cycle spans the host")
names = [s["name"] for s in res60.stages]
ok(names[0] == "preflight" and names[-1] == "validate", f"stage order: {names}")
lines = res60.report_lines()
parsed = [json.loads(ln) for ln in lines]
ok(parsed[0]["event"] == "config", "first report line is the config echo")
ok(parsed[-1]["event"] == "result" and parsed[-1]["ok"], "last line is the result")
timing_lines = [p for p in parsed if p["event"] == "timings"]
ok(len(timing_lines) == 1, "exactly one timings line")
ok(all("ms" not in p or p["event"] == "timings" for p in parsed),
   "timings isolated from other lines")

res60b = find_hamiltonian_absorption(h60)
strip = lambda ls: [ln for ln in ls if json.loads(ln)["event"] != "timings"]
ok(strip(res60b.report_lines()) == strip(lines),
   "reports byte-identical modulo the timings line")
ok(res60b.digest == res60.digest, "digest deterministic")

print("== end-to-end n=40 / n=80")
h40 = random_hypergraph(40, 4, 0.95, seed=11)
res40 = find_hamiltonian_absorption(h40, PipelineConfig(seed=4))
if not res40.ok:
    print(res40.stage, res40.diagnostics)
ok(res40.ok and validate_result(h40, res40.cycle), "n=40 cycle certified")

h80 = random_hypergraph(80, 4, 0.9, seed=7)
t80 = time.time()
res80 = find_hamiltonian_absorption(h80, PipelineConfig(seed=1))
if not res80.ok:
    print(res80.stage, res80.diagnostics)
ok(res80.ok and validate_result(h80, res80.cycle), "n=80 cycle certified")
print(f"    n=80 wall time {time.time() - t80:.1f}s")

print("== failures")
ha, _ = construction_a(9)
resa = find_hamiltonian_absorption(ha)
ok(isinstance(resa, PipelineFailure) and resa.stage == "preflight",
   "lower-bound host (n=9) fails preflight, never fakes a cycle")
ok(resa.cycle is None, "failure carries no cycle")
fl = [json.loads(ln) for ln in resa.report_lines()]
ok(fl[-1]["ok"] is False and fl[-1]["stage"] == "preflight", "failure report shape")

h3 = Hypergraph(3, 30, [(0, 1, 2)])
res3 = find_hamiltonian_absorption(h3)
ok(res3.stage == "preflight" and "4-uniform" in res3.diagnostics["reason"],
   "non-4-uniform host rejected")

print("== society stage wiring")
res_soc = find_hamiltonian_absorption(
    h60, PipelineConfig(society_samples=4, seed=0))
soc_stages = [s for s in res_soc.stages if s["name"] == "society"]
ok(len(soc_stages) == 1, "society stage present when requested")
if "histogram" in soc_stages[0]:
    ok(sum(soc_stages[0]["histogram"].values()) == 4, "society stage accounting")

print(f"\nAll {CHECKS} pipeline checks pass ({time.time() - t_start:.1f}s)")
