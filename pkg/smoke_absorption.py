"""Scratch driver for absorption.py — thorough postcondition checks."""

import sys
import time
from dataclasses import dataclass

import numpy as np

sys.path.insert(0, "src")

from hyperham.absorption import (
    AbsorbConfig,
    AbsorbError,
    Absorber,
    AbsorbingPath,
    BuildAbsorbingError,
    absorb,
    build_absorbing_path,
    find_absorber,
    find_absorber_ex,
    find_elves,
    joint_link_paths,
)
from hyperham.connectivity import build_family4, connectable_triples, edge_tensor
from hyperham.extremal import random_hypergraph
from hyperham.hypercore import HypergraphError
from hyperham.tightpaths import end_triples, validate

CHECKS = 0


def ok(cond, label):
    global CHECKS
    CHECKS += 1
    if not cond:
        raise AssertionError(f"FAILED: {label}")


@dataclass
class StubReservoir:
    reservoir: frozenset
    theta_star: float


def main():
    t0 = time.time()
    n = 60
    h = random_hypergraph(n, 4, 0.92, seed=202)
    fam = build_family4(h, alpha=0.15, beta=1e-6, ell=3)
    idx = connectable_triples(fam, 0.1)
    e4 = edge_tensor(h)
    print(f"setup n={n}: {time.time() - t0:.1f}s")

    # ---------------------------------------------------- joint_link_paths
    for a, x in ((5, 7), (None, 7), (30, 31)):
        hits = joint_link_paths(h, a, x, idx, limit=4, forbidden=(0, 1, 2),
                                seed=9)
        ok(len(hits) >= 1, f"joint_link_paths({a},{x}) found something")
        for b in hits:
            ok(len(set(b)) == 6, "sextuple distinct")
            ok(not set(b) & {0, 1, 2}, "sextuple avoids forbidden")
            ok(x not in b and (a is None or a not in b),
               "sextuple avoids the link vertices")
            for w in range(4):
                tri = b[w : w + 3]
                ok(e4[(x,) + tri], f"window {w} in link of x")
                if a is not None:
                    ok(e4[(a,) + tri], f"window {w} in link of a")
            ok(idx.conn[b[0], b[1], b[2]], "start triple connectable")
            ok(idx.conn[b[3], b[4], b[5]], "end triple connectable")
        again = joint_link_paths(h, a, x, idx, limit=4, forbidden=(0, 1, 2),
                                 seed=9)
        ok(again == hits, "joint_link_paths deterministic")
    try:
        joint_link_paths(h, 7, 7, idx)
        ok(False, "a == x should raise")
    except HypergraphError:
        ok(True, "a == x raises")
    try:
        joint_link_paths(h, 1, 2)
        ok(False, "no index and no family should raise")
    except HypergraphError:
        ok(True, "no index and no family raises")
    # family fallback builds its own index
    viafam = joint_link_paths(h, 5, 7, None, 0.1, limit=1, family4=fam, seed=9)
    ok(len(viafam) == 1, "family4 fallback works")
    print(f"joint_link_paths: ok ({time.time() - t0:.1f}s)")

    # ----------------------------------------------------------- find_elves
    elves = find_elves(h, fam, limit=3, forbidden=(0, 1, 2), index4=idx, seed=5)
    ok(len(elves) >= 1, "find_elves found something")
    for elf in elves:
        ok(len(set(elf)) == 11, "elf distinct")
        ok(not set(elf) & {0, 1, 2}, "elf avoids forbidden")
        u, xs, w = elf[:4], elf[4:8], elf[8:]
        ok(validate(list(elf), h, kind="path").ok, "long path valid")
        ok(validate(list(u + w), h, kind="path").ok, "short path valid")
        ok(idx.conn[u[0], u[1], u[2]], "u-end connectable")
        ok(idx.conn[w[0], w[1], w[2]], "w-end connectable")
    again = find_elves(h, fam, limit=3, forbidden=(0, 1, 2), index4=idx, seed=5)
    ok(again == elves, "find_elves deterministic")
    print(f"find_elves: ok ({time.time() - t0:.1f}s)")

    # -------------------------------------------------------- find_absorber
    ab, diag = find_absorber_ex(h, fam, idx, forbidden=(0, 1, 2), seed=11)
    ok(ab is not None, "generic absorber found")
    ok(diag["found"] and diag["stage"] == "done", "diagnostics mark success")
    ok(len(ab.vertices) == 35 and len(set(ab.vertices)) == 35, "35 distinct")
    ok(not set(ab.vertices) & {0, 1, 2}, "absorber avoids forbidden")
    ok(ab.verify(h, idx) == [], "generic absorber verifies")
    ok(ab.a_vec is None, "generic mode records no targets")
    paths = ab.five_paths
    ok(len(paths) == 5 and all(len(p) == 7 for p in paths), "five 7-paths")
    tiled = [v for p in paths for v in p]
    ok(sorted(tiled) == sorted(ab.vertices), "five paths tile the vertex set")

    ab2 = find_absorber(h, fam, idx, a_vec=(1, 2, 3, 4), seed=13)
    ok(ab2 is not None, "targeted absorber found")
    ok(ab2.a_vec == (1, 2, 3, 4), "targets recorded")
    ok(not set(ab2.vertices) & {1, 2, 3, 4}, "absorber avoids its targets")
    ok(ab2.verify(h, idx) == [], "targeted absorber verifies")
    for i in range(4):
        ok(ab2.swap_feasible(e4, ab2.a_vec[i], i), f"target {i} swap feasible")

    ab3 = find_absorber(h, fam, idx, a_vec=(9, 9, 9, 9), seed=17)
    ok(ab3 is not None and 9 not in ab3.vertices, "repeated targets legal")
    try:
        find_absorber(h, fam, idx, a_vec=(1, 2, 3))
        ok(False, "short a_vec should raise")
    except HypergraphError:
        ok(True, "short a_vec raises")
    print(f"find_absorber: ok ({time.time() - t0:.1f}s)")

    # -------------------------------------------------- build_absorbing_path
    res = StubReservoir(frozenset({0, 1, 2, 3, 4}), 0.8)
    ap = build_absorbing_path(h, fam, idx, res, AbsorbConfig(seed=3))
    ok(len(ap.path.vertices) == 35 + 4 * 2, "N=1 size 43")
    ok(len(ap.absorbers) == 1, "one absorber")
    ok(len(ap.segments) == 5 and len(ap.joins) == 4, "5 segments 4 joins")
    ok([s["role"] for s in ap.segments] == ["b1", "b2", "b3", "b4", "parking"],
       "roles in order")
    ok([s["offset"] for s in ap.segments] == [0, 9, 18, 27, 36],
       "offsets with inner-2 joins")
    for s in ap.segments:
        seg = ap.path.vertices[s["offset"] : s["offset"] + s["length"]]
        role_i = ["b1", "b2", "b3", "b4", "parking"].index(s["role"])
        ok(seg == ap.absorbers[s["absorber"]].five_paths[role_i],
           "segment content matches absorber path")
    ok(not set(ap.path.vertices) & set(res.reservoir), "disjoint from reservoir")
    ok(idx.conn[ap.path.vertices[:3]] and idx.conn[ap.path.vertices[-3:]],
       "path ends connectable")
    ok(ap.config["menu_deviation"] is True and ap.config["paper_join_inner"] == 34,
       "join override flagged with full-size value")
    d1 = ap.to_dict()
    ap_again = build_absorbing_path(h, fam, idx, res, AbsorbConfig(seed=3))
    ok(ap_again.to_dict() == d1, "build deterministic")

    ap_b = build_absorbing_path(h, fam, idx, res,
                                AbsorbConfig(extra_blocks=1, seed=3))
    ok(len(ap_b.path.vertices) == 47, "one extra block adds 4")
    ok(sorted(j["inner"] for j in ap_b.joins) == [2, 2, 2, 6],
       "extra block went to one join")

    ap0 = build_absorbing_path(h, fam, idx, res,
                               AbsorbConfig(n_absorbers=0, extra_blocks=5, seed=3))
    ok(len(ap0.path.vertices) == 7 + 4 * 5, "N=0 with 5 hops is 27")
    ok(len(ap0.absorbers) == 0 and len(ap0.segments) == 1, "seed segment only")
    ok(ap0.segments[0]["role"] == "seed", "seed role")
    ok(all(j.get("extension") for j in ap0.joins), "hops flagged as extensions")
    ok(idx.conn[ap0.path.vertices[-3:]], "extended end connectable")

    try:
        build_absorbing_path(h, fam, idx, StubReservoir(frozenset({0}), 0.1),
                             AbsorbConfig(seed=3))
        ok(False, "tiny theta* should fail at size stage")
    except BuildAbsorbingError as e:
        ok(e.stage == "size", "size stage reported")
    try:
        build_absorbing_path(h, fam, idx,
                             StubReservoir(frozenset(range(n)), 0.8),
                             AbsorbConfig(seed=3))
        ok(False, "all-forbidden should fail at collection")
    except BuildAbsorbingError as e:
        ok(e.stage == "absorber-collection", "collection stage reported")
    try:
        AbsorbConfig(join_inner=3)
        ok(False, "join_inner=3 should raise")
    except HypergraphError:
        ok(True, "join_inner parity enforced")
    print(f"build_absorbing_path: ok ({time.time() - t0:.1f}s)")

    # ---------------------------------------------------------------- absorb
    ok(absorb(ap, set()) is ap.path, "empty Z returns the path itself")
    free = [v for v in range(n)
            if v not in set(ap.path.vertices) | set(res.reservoir)]
    ok(len(free) >= 4, "spare vertices exist")
    rng = np.random.default_rng(1)
    absorbed = None
    for _ in range(20):
        z = tuple(int(v) for v in rng.choice(free, 4, replace=False))
        try:
            absorbed = absorb(ap, z)
            break
        except AbsorbError:
            continue
    ok(absorbed is not None, "some quadruple absorbs")
    ok(len(absorbed.vertices) == len(ap.path.vertices) + 4, "length grows by 4")
    ok(set(absorbed.vertices) == set(ap.path.vertices) | set(z),
       "vertex set is union with Z")
    ok(end_triples(absorbed) == end_triples(ap.path), "ends preserved")
    ok(validate(list(absorbed.vertices), h, kind="path").ok, "absorbed valid")
    ok(absorb(ap, z).vertices == absorbed.vertices, "absorb deterministic")

    try:
        absorb(ap, set(free[:2]))
        ok(False, "|Z|=2 should raise")
    except AbsorbError as e:
        ok("divisible" in str(e), "divisibility error")
    try:
        absorb(ap, set(ap.path.vertices[5:9]))
        ok(False, "overlapping Z should raise")
    except AbsorbError as e:
        ok("overlaps" in str(e), "overlap error")
    free0 = [v for v in range(n) if v not in set(ap0.path.vertices)][:4]
    try:
        absorb(ap0, set(free0))
        ok(False, "N=0 cannot absorb")
    except AbsorbError as e:
        ok("no feasible absorber" in str(e), "no-absorber error")
    print(f"absorb |Z|<=4: ok ({time.time() - t0:.1f}s)")

    # ------------------------------------- two absorbers, |Z| = 8, at n=100
    t1 = time.time()
    n2 = 100
    h2 = random_hypergraph(n2, 4, 0.92, seed=77)
    fam2 = build_family4(h2, alpha=0.15, beta=1e-6, ell=3)
    idx2 = connectable_triples(fam2, 0.1)
    print(f"setup n={n2}: {time.time() - t1:.1f}s")
    res2 = StubReservoir(frozenset({0, 1}), 0.93)
    ap2 = build_absorbing_path(h2, fam2, idx2, res2,
                               AbsorbConfig(n_absorbers=2, seed=5))
    ok(len(ap2.path.vertices) == 70 + 9 * 2, "N=2 size 88")
    ok(len(ap2.absorbers) == 2 and len(ap2.segments) == 10, "two absorbers laid out")
    free2 = [v for v in range(n2)
             if v not in set(ap2.path.vertices) | set(res2.reservoir)]
    ok(len(free2) >= 8, "8 spares exist")
    rng2 = np.random.default_rng(2)
    absorbed2 = None
    for _ in range(20):
        z8 = tuple(int(v) for v in rng2.choice(free2, 8, replace=False))
        try:
            absorbed2 = absorb(ap2, z8)
            break
        except AbsorbError:
            continue
    ok(absorbed2 is not None, "|Z|=8 absorbs")
    ok(len(absorbed2.vertices) == 96, "length 96 after absorbing 8")
    ok(set(absorbed2.vertices) == set(ap2.path.vertices) | set(z8),
       "union identity for |Z|=8")
    ok(end_triples(absorbed2) == end_triples(ap2.path), "ends preserved (8)")
    ok(validate(list(absorbed2.vertices), h2, kind="path").ok,
       "absorbed-8 path valid")
    print(f"absorb |Z|=8: ok ({time.time() - t1:.1f}s)")

    print(f"\nAll {CHECKS} absorption checks pass ({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
