"""Scratch smoke for connector.py; converted into real tests later."""

import numpy as np

from hyperham.connectivity import (
    build_family3,
    build_family4,
    connectable_pairs,
    connectable_triples,
)
from hyperham.connector import (
    BudgetExceeded,
    PreconditionError,
    ReservoirFailure,
    connect3,
    connect3_ex,
    connect4,
    connect4_ex,
    residue_lengths,
    reserve_connect,
    reserve_connect_ex,
    sample_reservoir,
)
from hyperham.extremal import random_hypergraph
from hyperham.hypercore import HypergraphError
from hyperham.tightpaths import validate

rng_checks = 0


def check(cond, msg):
    global rng_checks
    rng_checks += 1
    if not cond:
        raise AssertionError(msg)


# ---------------------------------------------------------------- menus
for ell in range(3, 100, 2):
    m4 = residue_lengths(4, ell)
    check(m4.inner_counts == (32 * ell + 49, 8 * ell + 10, 16 * ell + 23, 24 * ell + 36),
          f"menu4 ell={ell}")
    check([c % 4 for c in m4.inner_counts] == [1, 2, 3, 0], "menu4 residues")
    check(max(m4.inner_counts) <= 50 * ell, "menu4 cap")
    check(m4.for_residue(2) == 8 * ell + 10, "for_residue")
    m3 = residue_lengths(3, ell)
    check(m3.inner_counts == (3 * ell + 1, 6 * ell + 5, 9 * ell + 9), f"menu3 ell={ell}")
    check([c % 3 for c in m3.inner_counts] == [1, 2, 0], "menu3 residues")
    check(max(m3.inner_counts) <= 12 * ell, "menu3 cap")
check(residue_lengths(4, 3).inner_counts == (145, 34, 71, 108), "ell=3 menu")
check(residue_lengths(3, 3).inner_counts == (10, 23, 36), "ell=3 menu3")
for bad in [(5, 3), (4, 4), (4, 1), (4, 3.0), (3, -5)]:
    try:
        residue_lengths(*bad)
        check(False, f"menu accepted {bad}")
    except HypergraphError:
        pass
try:
    residue_lengths(4, 3).for_residue(5)
    check(False, "residue 5 accepted")
except HypergraphError:
    pass
print("menus ok")

# ------------------------------------------------------------ 3-uniform
n3 = 48
h3 = random_hypergraph(n3, 3, 0.9, seed=101)
fam3 = build_family3(h3, alpha=0.15, beta=1e-6, ell=3)
idx3 = connectable_pairs(fam3, 0.1)
check(idx3.conn[0, 1] and idx3.conn[5, 9], "dense pairs connectable")

menu3 = residue_lengths(3, 3).inner_counts
for inner in [0, 1, 2, 3, 4, 5, 7] + list(menu3):
    path, diag = connect3_ex(h3, fam3, idx3, (0, 1), (5, 9), inner, seed=7)
    check(path is not None, f"connect3 inner={inner} failed")
    check(len(path.vertices) == inner + 4, f"length inner={inner}")
    check(path.vertices[:2] == (0, 1) and path.vertices[-2:] == (5, 9), "ends")
    check(validate(list(path.vertices), h3, kind="path").ok, "validity")
    check(diag["found"] and diag["nodes"] > 0, "diag")
    again = connect3(h3, fam3, idx3, (0, 1), (5, 9), inner, seed=7)
    check(again.vertices == path.vertices, f"determinism inner={inner}")
    other = connect3(h3, fam3, idx3, (0, 1), (5, 9), inner, seed=8)
    check(other is not None, "other seed works")
print("connect3 menu + small inners ok")

# allowed restriction: inner vertices only from [20, 48)
mask = np.zeros(n3, dtype=bool)
mask[20:] = True
p = connect3(h3, fam3, idx3, (0, 1), (5, 9), 6, allowed=mask, seed=3)
check(p is not None, "restricted connect3")
check(all(v >= 20 for v in p.vertices[2:-2]), "allowed respected")

# empty allowed: inner>0 impossible, inner=0 may still close directly
p = connect3(h3, fam3, idx3, (0, 1), (5, 9), 3, allowed=[], seed=3)
check(p is None, "empty allowed gives None")
_, diag = connect3_ex(h3, fam3, idx3, (0, 1), (5, 9), 3, allowed=[], seed=3)
check(diag.get("infeasible"), "infeasible flag")

# preconditions
try:
    connect3(h3, fam3, idx3, (0, 1), (1, 5), 4)
    check(False, "overlap accepted")
except PreconditionError:
    pass
try:
    connect3(h3, fam3, idx3, (0, 0), (5, 9), 4)
    check(False, "repeat accepted")
except PreconditionError:
    pass
idx3_hi = connectable_pairs(fam3, 0.99)
try:
    connect3(h3, fam3, idx3_hi, (0, 1), (5, 9), 4)
    check(False, "non-connectable accepted")
except PreconditionError:
    pass
print("connect3 guards ok")

# ------------------------------------------------------------ 4-uniform
n4 = 60
h4 = random_hypergraph(n4, 4, 0.92, seed=202)
fam4 = build_family4(h4, alpha=0.15, beta=1e-6, ell=3)
idx4 = connectable_triples(fam4, 0.1)
A, B = (0, 1, 2), (7, 8, 9)
check(bool(idx4.conn[A]) and bool(idx4.conn[B]), "triples connectable")

path, diag = connect4_ex(h4, fam4, idx4, A, B, residue=2, seed=11)
check(path is not None, "guided connect4 failed")
check(diag["strategy"] == "proof-guided", f"strategy={diag['strategy']}")
check(len(path.vertices) == 34 + 6, "inner 34")
check(path.vertices[:3] == A and path.vertices[-3:] == B, "ends")
check(validate(list(path.vertices), h4, kind="path").ok, "4-valid")
check(not diag["menu_deviation"], "menu length")
again = connect4(h4, fam4, idx4, A, B, residue=2, seed=11)
check(again.vertices == path.vertices, "connect4 determinism")
print(f"connect4 guided ok (nodes={diag['nodes']})")

# small non-menu inner counts go to the direct kernel
for inner in [2, 3, 4, 5]:
    p, d = connect4_ex(h4, fam4, idx4, A, B, inner_count=inner, seed=5)
    check(p is not None and len(p.vertices) == inner + 6, f"direct inner={inner}")
    check(d["strategy"] == "direct" and d["menu_deviation"], "direct diag")
    check(validate(list(p.vertices), h4, kind="path").ok, "direct valid")
print("connect4 direct ok")

# guards
try:
    connect4(h4, fam4, idx4, A, (2, 30, 31), residue=2)
    check(False, "overlap accepted")
except PreconditionError:
    pass
try:
    connect4(h4, fam4, idx4, A, B)
    check(False, "missing residue accepted")
except HypergraphError:
    pass
try:
    connect4(h4, fam4, idx4, A, B, residue=2, inner_count=5)
    check(False, "both residue and inner accepted")
except HypergraphError:
    pass
p, d = connect4_ex(h4, fam4, idx4, A, B, residue=1, seed=1, budget=4000)
check(p is None and d.get("infeasible"), "residue1 infeasible at n=60")
print("connect4 guards ok")

# ------------------------------------------------------- composed (n=80)
n4b = 80
h4b = random_hypergraph(n4b, 4, 0.9, seed=303)
fam4b = build_family4(h4b, alpha=0.15, beta=1e-6, ell=3)
idx4b = connectable_triples(fam4b, 0.1)
path, diag = connect4_ex(h4b, fam4b, idx4b, A, B, residue=3, seed=13)
check(path is not None, "composed connect4 failed")
check(diag["strategy"] == "composed", f"strategy={diag['strategy']}")
check(len(path.vertices) == 71 + 6, "inner 71")
check(validate(list(path.vertices), h4b, kind="path").ok, "composed valid")
check(len(set(path.vertices)) == 77, "all distinct")
again = connect4(h4b, fam4b, idx4b, A, B, residue=3, seed=13)
check(again.vertices == path.vertices, "composed determinism")
print(f"connect4 composed ok (nodes={diag['nodes']})")

# ------------------------------------------------------------- reservoir
state = sample_reservoir(h4, fam4, theta_star=0.6, zeta_ss=0.1, seed=99,
                         index4=idx4, validation_samples=2)
check(0.36 * n4 / 2 <= len(state.reservoir) <= 0.36 * n4, "size clause")
check(state.budget == len(state.reservoir), "desk-full budget")
check(state.budget_mode == "desk-full", "budget mode")
check(state.validation["menu_deviation"] is True, "deviation recorded")
check(state.validation["paper_menu"] == [145, 34, 71, 108], "paper menu recorded")
check(state.to_dict()["budget_mode"] == "desk-full", "to_dict mode")
per = state.validation["per_residue"]
check(set(per) == {"residue_1", "residue_2", "residue_3", "residue_4"}, "residue keys")
check(all(v["attempts"] == state.validation["samples"] for v in per.values()),
      "attempt counts")
state2 = sample_reservoir(h4, fam4, theta_star=0.6, zeta_ss=0.1, seed=99,
                          index4=idx4, validation_samples=2)
check(state2.reservoir == state.reservoir, "reservoir determinism")
check(state2.validation == state.validation, "validation determinism")

state3 = sample_reservoir(h4, fam4, theta_star=0.6, zeta_ss=0.1, seed=99,
                          index4=idx4, validation_samples=0,
                          theta_star_star=0.5)
check(state3.budget_mode == "paper-formula", "paper budget mode")
check(state3.budget == int(0.36 * 0.5 / 1200 * n4), "paper budget value")
try:
    sample_reservoir(h4, fam4, theta_star=1.5, zeta_ss=0.1, seed=1, index4=idx4)
    check(False, "theta out of range accepted")
except HypergraphError:
    pass

# spend accounting
used_before = set(state.used)
mask = state.allowed_mask()
picks = sorted(state.reservoir)
pA, pB = None, None
conn_rows = np.argwhere(idx4.conn)
rr = np.random.default_rng(5)
for _ in range(200):
    i, j = rr.integers(0, len(conn_rows), 2)
    t1 = tuple(int(v) for v in conn_rows[i])
    t2 = tuple(int(v) for v in conn_rows[j])
    if len(set(t1)) == 3 and len(set(t2)) == 3 and not set(t1) & set(t2):
        pA, pB = t1, t2
        break
check(pA is not None, "sample triples")
got = reserve_connect(state, h4, fam4, idx4, pA, pB, inner_count=3)
check(got is not None, "reserve_connect found")
check(set(got.vertices[3:-3]) <= state.reservoir, "inner from reservoir")
check(state.used == set(got.vertices[3:-3]) | used_before, "spent exactly inner")
before = set(state.used)
got2, d2 = reserve_connect_ex(state, h4, fam4, idx4, pB, pA, inner_count=3)
if got2 is not None:
    check(not (set(got2.vertices[3:-3]) & before), "no double spend")
    check(d2["reservoir"]["used"] == len(state.used), "diag reservoir")
try:
    reserve_connect(state, h4, fam4, idx4, pA, pB, residue=2)  # needs 34
    check(False, "budget overflow accepted")
except BudgetExceeded as e:
    check(e.needed == 34 and e.available == state.budget - len(state.used),
          "budget fields")
print("reservoir ok")

print(f"ALL CONNECTOR SMOKE PASSED ({rng_checks} checks)")
