"""Scratch smoke for concentration.py — deleted before final test run."""

import math
import time

import numpy as np

from hyperham.concentration import (
    WeightSystem,
    Z95,
    block_sampling_bound,
    block_sampling_check,
    bounded_tail_bound,
    bounded_tail_check,
    janson_bound,
    janson_exact_tail,
    janson_mc_tail,
)
from hyperham.extremal import random_hypergraph
from hyperham.hypercore import Hypergraph, HypergraphError

CHECKS = 0


def ok(cond, label):
    global CHECKS
    CHECKS += 1
    if not cond:
        raise AssertionError(f"FAIL: {label}")
    print(f"  ok {CHECKS:3d}: {label}")


t0 = time.time()

# ----- worked example: |V|=4, unit singletons, p=1/2
print("== worked example")
ws = WeightSystem.singletons(4, 0.5)
jb = janson_bound(ws, 1.0)
ok(jb.ex == 2.0, "EX = 2")
ok(jb.delta == 2.0, "Delta = 2")
ok(abs(jb.bound - math.exp(-0.25)) < 1e-15, "bound = exp(-1/4)")
ok(not jb.degenerate, "not degenerate")
ok(janson_exact_tail(ws, 1.0) == 5 / 16, "exact tail = 5/16")
ok(janson_bound(ws, 0.0).bound == 1.0, "t=0 gives bound 1")

# single weighted set: Delta = p^|A|
ws1 = WeightSystem(6, 0.3, {(0, 1, 2): 1.0})
jb1 = janson_bound(ws1, 0.01)
ok(abs(jb1.delta - 0.3**3) < 1e-15, "single set: Delta = p^|A|")
ok(abs(jb1.bound - math.exp(-0.0001 / (2 * 0.3**3))) < 1e-15,
   "single set bound closed form")

# ----- degenerate / edge cases
print("== edges")
ws_e = WeightSystem(4, 0.5, {})
jbe = janson_bound(ws_e, 0.0)
ok(jbe.degenerate and jbe.bound == 1.0 and jbe.ex == 0.0, "empty support, t=0")
ws_only_empty = WeightSystem(4, 0.5, {(): 3.0})
jb_oe = janson_bound(ws_only_empty, 1.0)
ok(jb_oe.ex == 3.0 and jb_oe.degenerate and jb_oe.bound == 0.0,
   "empty-set weight: constant X, degenerate zero bound")
ok(janson_exact_tail(WeightSystem.singletons(4, 1.0), 1.0) == 0.0,
   "p=1: deterministic X, tail 0 for t>0")
ok(janson_exact_tail(WeightSystem.singletons(4, 0.0), 0.0) == 1.0,
   "p=0: X=0, tail 1 at t=0")
for bad_t in (-0.1, 2.5):
    try:
        janson_bound(ws, bad_t)
        ok(False, f"t={bad_t} should raise")
    except HypergraphError:
        ok(True, f"t={bad_t} out of [0, EX] rejected")
try:
    janson_exact_tail(WeightSystem.singletons(21, 0.5), 0.0)
    ok(False, "n=21 exact should raise")
except HypergraphError:
    ok(True, "exact tail caps at n=20")
for bad in (
    lambda: WeightSystem(4, 1.5, {}),
    lambda: WeightSystem(4, 0.5, {(0, 9): 1.0}),
    lambda: WeightSystem(4, 0.5, {(0,): -1.0}),
    lambda: WeightSystem(0, 0.5, {}),
):
    try:
        bad()
        ok(False, "bad WeightSystem should raise")
    except HypergraphError:
        ok(True, "bad WeightSystem rejected")
ws_dup = WeightSystem(4, 0.5, [((0,), 1.0), ((0,), 2.0)])
ok(ws_dup.support_size == 1 and ws_dup.weight_values[0] == 3.0,
   "duplicate subsets merge additively")

# ----- diagonal lower bound on Delta + domination spot run
print("== invariants")
rng = np.random.default_rng(0)
for trial in range(40):
    n = int(rng.integers(3, 11))
    s = int(rng.integers(1, 12))
    items = []
    for _ in range(s):
        size = int(rng.integers(1, min(n, 4) + 1))
        a = tuple(sorted(rng.choice(n, size, replace=False)))
        items.append((a, float(rng.random() * 2)))
    p = float(rng.uniform(0.05, 0.95))
    w = WeightSystem(n, p, items)
    ex = w.expectation
    diag = sum(wt * wt * p ** len(a) for a, wt in w.items())
    jbx = janson_bound(w, 0.0)
    assert jbx.delta >= diag - 1e-12, "Delta >= diagonal"
    last = 1.1
    for t in np.linspace(0, ex, 8):
        r = janson_bound(w, float(t))
        tail = janson_exact_tail(w, float(t))
        assert tail <= r.bound + 1e-12, f"domination violated: {tail} > {r.bound}"
        assert r.bound <= last + 1e-12, "bound must be nonincreasing in t"
        last = r.bound
ok(True, "40 random systems: domination + diagonal + monotone in t")

# ----- Monte-Carlo tail
print("== mc tail")
est = janson_mc_tail(ws, 1.0, 50_000, seed=3)
ok(est.ci_low <= 5 / 16 <= est.ci_high, f"MC CI covers 5/16 ({est.estimate:.4f})")
est2 = janson_mc_tail(ws, 1.0, 50_000, seed=3)
ok(est.estimate == est2.estimate and est.hits == est2.hits, "MC deterministic per seed")
est_w = janson_mc_tail(ws, 1.0, 50_000, seed=3, workers=4)
ok(est_w.hits == est.hits, "worker count does not change the result")
one = janson_mc_tail(ws, 1.0, 1, seed=0)
ok(one.estimate in (0.0, 1.0), "single trial in {0,1}")
ok(abs(Z95 - 1.959963984540054) < 1e-15, "z pinned")

# ----- bounded corollary
print("== bounded corollary")
bt = bounded_tail_bound(400, 200, 2, 0.5)
ok(abs(bt.bound - 3 * math.exp(-0.25 * 200 / 48)) < 1e-12, "formula value")
ok(bt.vacuous == (bt.bound >= 1), "vacuous flag consistent")
ok(bt.vacuous, "k=2 m=200 xi=0.5 is (barely) vacuous: reported, not clamped")
b_small = bounded_tail_bound(100, 90, 1, 0.9)
ok(not b_small.vacuous, "k=1 m=90 xi=0.9 informative")
for bad in (
    lambda: bounded_tail_bound(10, 20, 2, 0.5),
    lambda: bounded_tail_bound(10, 5, 6, 0.5),
    lambda: bounded_tail_bound(10, 5, 2, 1.0),
    lambda: bounded_tail_bound(10, 5, 2, 0.0),
):
    try:
        bad()
        ok(False, "bad bounded args should raise")
    except HypergraphError:
        ok(True, "bad bounded args rejected")

n_b, m_b = 120, 60
rngb = np.random.default_rng(5)
wmat = np.zeros((n_b, n_b))
iu = np.triu_indices(n_b, 1)
wmat[iu] = rngb.random(len(iu[0]))
chk = bounded_tail_check(wmat, n_b, m_b, 2, 0.5, 20_000, seed=9)
ok(chk["pass"], f"bounded MC check passes (emp {chk['empirical']:.5f} vs "
   f"bound {chk['bound']:.3f}, vacuous={chk['vacuous']})")
chk2 = bounded_tail_check(wmat, n_b, m_b, 2, 0.5, 20_000, seed=9, workers=4)
ok(chk2["deviations"] == chk["deviations"], "bounded check worker-invariant")
d3 = {a: 1.0 for a in [(0, 1, 2), (1, 2, 3), (0, 2, 3)]}
chk3 = bounded_tail_check(d3, 30, 15, 3, 0.9, 2000, seed=1)
ok(chk3["pass"], "k=3 dict-weight check runs")

# ----- block-sampling corollary
print("== block sampling")
bs = block_sampling_bound(100, 80, 1, 0.9)
ok(abs(bs.bound - 12 * math.sqrt(80) * math.exp(-0.81 * 80 / 48)) < 1e-12,
   "block formula value")
ok(bs.lower_admissible == 16 / 80, "eta-free lower side")
try:
    block_sampling_bound(100, 50, 2, 0.6)
    ok(False, "m too small for xi range should raise")
except HypergraphError as e:
    ok("16k^2/m" in str(e), "violated side named (m side)")
try:
    block_sampling_bound(5000, 4000, 2, 0.5, eta=0.02)
    ok(False, "eta side should raise")
except HypergraphError as e:
    ok("8k^2*eta" in str(e), "violated side named (eta side)")
ok(block_sampling_bound(100, 90, 1, 0.5).bound
   > block_sampling_bound(100, 90, 1, 0.9).bound, "monotone decreasing in xi")
m_lo = 2 * 24 * 1 ** 4  # inside the decreasing-in-m regime for k=1, xi=0.9
ok(block_sampling_bound(10**6, m_lo, 1, 0.9).bound
   > block_sampling_bound(10**6, 2 * m_lo, 1, 0.9).bound,
   "monotone decreasing in m (regime m >= 24 k^(2k+2)/xi^2)")

# clause (a) trivial: Q = V^k
blocks = [tuple(range(i * 4, i * 4 + 4)) for i in range(100)]
part = (blocks, set())
q_all = np.ones((400, 400), dtype=bool)
rep = block_sampling_check(q_all, part, 50, 0.6, 200, seed=0)
ok(rep.deviations == 0 and rep.empirical == 0.0, "Q = V^k: zero deviations")
ok(rep.d == 1.0 and rep.center == (4 * 50) ** 2, "d=1 and center (Mm)^k")
ok(not rep.admissible and rep.violated_side == "16k^2/m",
   "inadmissible xi flagged (not raised) with the side named")
ok(rep.vacuous and rep.passed, "vacuous bound flagged, counted as pass")

# criterion-style run: random Q with d ~ 0.5, 10^4 samples
qr = np.random.default_rng(11).random((400, 400)) < 0.5
t_bs = time.time()
rep_r = block_sampling_check(qr, part, 50, 0.6, 10_000, seed=2)
print(f"    10^4 samples in {time.time() - t_bs:.1f}s; "
      f"empirical {rep_r.empirical}, bound {rep_r.bound:.1f}")
ok(rep_r.passed, "criterion-style run passes (vacuous or dominated)")
ok(rep_r.to_dict()["pass"] == rep_r.passed, "report serializes")

# clause (b): hypergraph target
hb = random_hypergraph(80, 3, 0.3, seed=4)
part_b = ([tuple(range(i * 4, i * 4 + 4)) for i in range(20)], set())
rep_b = block_sampling_check(hb, part_b, 10, 0.9, 500, seed=6)
ok(rep_b.clause == "b" and rep_b.k == 3, "clause b wiring")
ok(rep_b.passed, "clause b passes")
rep_b2 = block_sampling_check(hb, part_b, 10, 0.9, 500, seed=6)
ok(rep_b2.deviations == rep_b.deviations, "block check deterministic")

# structural errors
for bad in (
    lambda: block_sampling_check(q_all, part, 200, 0.6, 10),
    lambda: block_sampling_check(q_all, part, 50, 1.2, 10),
    lambda: block_sampling_check(np.ones((9, 9), bool), part, 5, 0.5, 10),
    lambda: block_sampling_check(q_all, ([(0, 1), (2, 3, 4)], set()), 1, 0.5, 10),
):
    try:
        bad()
        ok(False, "structural error should raise")
    except HypergraphError:
        ok(True, "structural error rejected")

print(f"\nAll {CHECKS} concentration checks pass ({time.time() - t0:.1f}s)")
