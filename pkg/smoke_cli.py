"""Scratch checks for cli.py — run and delete."""

import io
import json
import math
import os
import subprocess
import sys
import tempfile
from contextlib import redirect_stdout

from hyperham.cli import main

PASS = 0
FAIL = 0


def ok(cond, label):
    global PASS, FAIL
    if cond:
        PASS += 1
        print(f"  ok  {label}")
    else:
        FAIL += 1
        print(f"FAIL  {label}")


def run(argv):
    """In-process invocation: (exit_code, parsed JSON lines)."""
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    lines = [json.loads(ln) for ln in buf.getvalue().splitlines()]
    return code, lines


def by_event(lines, event):
    return [ln for ln in lines if ln["event"] == event]


def strip_timings(lines):
    return [ln for ln in lines if ln["event"] != "timings"]


tmp = tempfile.mkdtemp(prefix="hyperham-cli-")
path_a9 = os.path.join(tmp, "a9.txt")
path_rand = os.path.join(tmp, "r40.txt")
path_complete = os.path.join(tmp, "k9.txt")
path_g = os.path.join(tmp, "g.txt")
path_3u = os.path.join(tmp, "h3.txt")

# ----- shape of every report
print("== report shape")
code, lines = run(["gen", "construction_a", "9", "--out", path_a9])
ok(code == 0, "gen construction_a exit 0")
ok(lines[0]["event"] == "command" and lines[0]["subcommand"] == "gen",
   "command line first")
ok(lines[-1]["event"] == "result" and lines[-1]["ok"] is True, "result line last")
ok(lines[-2]["event"] == "timings", "timings isolated second to last")
ok(sum(1 for ln in lines if ln["event"] == "timings") == 1, "one timings line")
gen_ev = by_event(lines, "generated")[0]
ok(gen_ev["n"] == 9 and gen_ev["k"] == 4, "generated echo")
ok(gen_ev["partition"] is not None and len(gen_ev["partition"]["x"]) > 0,
   "partition recorded")
ok(os.path.exists(path_a9), "file written")

# round trip through the parser
from hyperham.hypercore import parse
from hyperham.extremal import construction_a

with open(path_a9) as fh:
    h_back = parse(fh.read())
h_ref, _ = construction_a(9)
ok(h_back.edges == h_ref.edges, "gen file round-trips")

# bad n: structured failure, report still complete
code, lines = run(["gen", "construction_a", "7", "--out", path_a9])
ok(code == 2, "gen n=7 exit 2")
ok(by_event(lines, "failure") and lines[-1]["event"] == "result"
   and lines[-1]["exit_code"] == 2, "failure report complete")

# ----- degree on a complete host: C(n-2, 2)
print("== degree")
code, _ = run(["gen", "random", "9", "--p", "1.0", "--out", path_complete])
ok(code == 0, "gen complete host")
code, lines = run(["degree", path_complete, "--j", "2"])
ok(code == 0, "degree exit 0")
dv = by_event(lines, "degree")[0]
ok(dv["delta"] == math.comb(7, 2), "complete delta_2 = C(7,2)")
ok(len(dv["witness"]) == 2, "witness is a pair")

# missing file -> structured failure
code, lines = run(["degree", os.path.join(tmp, "nope.txt"), "--j", "2"])
ok(code == 2 and by_event(lines, "failure"), "missing file: exit 2 + failure event")

# ----- find-cycle brute on construction_a(9): none, exhaustive
print("== find-cycle brute")
code, lines = run(["find-cycle", path_a9, "--method", "brute"])
# regenerate first (the failed gen above overwrote nothing; a9 still valid)
if not by_event(lines, "search"):
    run(["gen", "construction_a", "9", "--out", path_a9])
    code, lines = run(["find-cycle", path_a9, "--method", "brute"])
ok(code == 2, "construction_a(9) brute exit 2")
sv = by_event(lines, "search")[0]
ok(sv["status"] == "none" and sv["exhaustive"] is True, "report: none, exhaustive")

# found case: complete host n=9 has a tight cycle
cyc_out = os.path.join(tmp, "cycle.json")
code, lines = run(["find-cycle", path_complete, "--method", "brute",
                   "--out", cyc_out])
ok(code == 0, "complete host brute exit 0")
cv = by_event(lines, "cycle")[0]
ok(cv["length"] == 9 and cv["digest"].startswith("sha256:"), "cycle event")
with open(cyc_out) as fh:
    doc = json.load(fh)
ok(doc["kind"] == "tight-cycle" and len(doc["vertices"]) == 9, "cycle file")
ok(by_event(lines, "artifact"), "artifact event for --out")

# ----- find-cycle pipeline end to end + determinism
print("== find-cycle pipeline")
code, _ = run(["gen", "random", "40", "--p", "0.95", "--seed", "11",
               "--out", path_rand])
ok(code == 0, "gen random host")
code1, lines1 = run(["find-cycle", path_rand, "--method", "pipeline",
                     "--seed", "4"])
ok(code1 == 0, "pipeline finds a cycle")
res = by_event(lines1, "result")
ok(any(r.get("cycle_length") == 40 for r in res), "pipeline result spans host")
ok(len(by_event(lines1, "config")) == 1, "pipeline config line present")
ok(by_event(lines1, "config")[0]["seed"] == 4, "seed override reaches config")
code2, lines2 = run(["find-cycle", path_rand, "--method", "pipeline",
                     "--seed", "4"])
ok(strip_timings(lines1) == strip_timings(lines2),
   "same command+seed: identical modulo timings")
ok(len(by_event(lines1, "timings")) == 2,
   "pipeline + wrapper timings both isolated")

# config file: applied, unknown keys rejected
cfg_path = os.path.join(tmp, "cfg.txt")
with open(cfg_path, "w") as fh:
    fh.write("# comment\nalpha = 0.2\nseed = 9\nmode = desk\n")
code, lines = run(["find-cycle", path_rand, "--config", cfg_path])
cfgev = by_event(lines, "config")
ok(cfgev and cfgev[0]["alpha"] == 0.2 and cfgev[0]["seed"] == 9,
   "config file values applied")
code, lines = run(["find-cycle", path_rand, "--config", cfg_path, "--seed", "3"])
ok(by_event(lines, "config")[0]["seed"] == 3, "--seed overrides config file")
with open(cfg_path, "a") as fh:
    fh.write("not_a_knob = 1\n")
code, lines = run(["find-cycle", path_rand, "--config", cfg_path])
ok(code == 2, "unknown config key exit 2")
ok(by_event(lines, "failure")[0]["key"] == "not_a_knob", "offending key named")

# preflight failure on construction_a(9): report, exit 2
code, lines = run(["find-cycle", path_a9, "--method", "pipeline"])
ok(code == 2, "pipeline on construction_a(9) exit 2")
rv = [r for r in by_event(lines, "result") if "stage" in r]
ok(rv and rv[0]["stage"] == "preflight", "failure stage recorded")

# ----- verify
print("== verify")
code, lines = run(["verify", "--lemma", "NCT", path_rand, "--zeta", "0.05"])
ok(code == 0, "NCT exit 0")
vv = by_event(lines, "verifier")[0]
ok(vv["lemma"] == "NCT" and vv["pass"] in (True, None), "NCT report")
code, lines = run(["verify", "--lemma", "F41analog", path_rand])
ok(code == 0 and by_event(lines, "verifier")[0]["pass"] is True,
   "F41analog unconditional pass")

# blakley-roy on a 2-uniform host
with open(path_g, "w") as fh:
    fh.write("2 5\n0 1\n1 2\n2 3\n3 4\n0 4\n")  # 5-cycle, regular
code, lines = run(["verify", "--lemma", "blakley-roy", path_g])
vv = by_event(lines, "verifier")[0]
ok(code == 0 and vv["pass"] is True, "blakley-roy pass")
ok(vv["walks"] * 25 == 10**3, "5-cycle: equality (regular graph)")

# L36 with both graphs the same complete graph
with open(path_g, "w") as fh:
    fh.write("2 6\n" + "".join(f"{i} {j}\n" for i in range(6)
                               for j in range(i + 1, 6)))
code, lines = run(["verify", "--lemma", "L36", path_g, "--u", "0,1,2,3",
                   "--alpha", "0.15"])
vv = by_event(lines, "verifier")[0]
ok(vv["lemma"] == "L36" and code in (0, 2), "L36 runs")

# 3-uniform lemma on a dense random 3-graph
from hyperham.extremal import random_hypergraph
from hyperham.hypercore import serialize

h3 = random_hypergraph(18, 3, 0.95, seed=3)
with open(path_3u, "w") as fh:
    fh.write(serialize(h3))
code, lines = run(["verify", "--lemma", "F41", path_3u, "--zeta", "0.1"])
ok(code == 0 and by_event(lines, "verifier")[0]["pass"] is True,
   "F41 unconditional pass")
code, lines = run(["verify", "--lemma", "L35", path_3u, "--zeta", "0.002"])
vv = by_event(lines, "verifier")[0]
ok(code in (0, 2) and vv["lemma"] == "L35", "L35 runs with h_prime defaulted")

# asymptotic mode with unmet hypotheses -> structured failure
code, lines = run(["verify", "--lemma", "NCT", path_rand, "--zeta", "0.05",
                   "--mode", "asymptotic"])
ok(code in (0, 2), "asymptotic mode runs")

# wrong uniformity -> structured failure
code, lines = run(["verify", "--lemma", "NCT", path_3u])
ok(code == 2 and by_event(lines, "failure"), "NCT on 3-uniform host: exit 2")

# ----- connect
print("== connect")
code, lines = run(["connect", path_rand, "--triple-a", "0,1,2",
                   "--triple-b", "3,4,5", "--inner", "5", "--zeta", "0.05"])
ok(code == 0, "connect exit 0")
pv = by_event(lines, "path")[0]
ok(pv["inner"] == 5 and pv["length"] == 11, "path has requested inner count")
ok(pv["vertices"][:3] == [0, 1, 2] and pv["vertices"][-3:] == [3, 4, 5],
   "path endpoints as ordered")
# residue 1 asks for the full menu count (145 inner at ell=3): infeasible
# on n=40, reported as none rather than an error
code, lines = run(["connect", path_rand, "--triple-a", "0,1,2",
                   "--triple-b", "3,4,5", "--residue", "1"])
ok(code == 2 and by_event(lines, "connect")[0]["found"] is False,
   "residue form: menu count infeasible on small host")
ok(by_event(lines, "connect")[0]["diag"]["inner"] == 145,
   "menu count 145 echoed in diagnostics")
# overlap -> precondition failure
code, lines = run(["connect", path_rand, "--triple-a", "0,1,2",
                   "--triple-b", "2,3,4", "--inner", "5"])
ok(code == 2 and by_event(lines, "failure"), "overlapping triples exit 2")
# tiny allowed set -> none
code, lines = run(["connect", path_rand, "--triple-a", "0,1,2",
                   "--triple-b", "3,4,5", "--inner", "5",
                   "--allowed", "6,7", "--budget", "5000"])
ok(code == 2 and by_event(lines, "connect")[0]["found"] is False,
   "infeasible allowed set: none, exit 2")

# ----- absorbers (two disjoint absorbers need 70 vertices: bigger host)
print("== absorbers")
path_big = os.path.join(tmp, "r78.txt")
run(["gen", "random", "78", "--p", "0.92", "--seed", "5", "--out", path_big])
code, lines = run(["absorbers", path_big, "--count", "2", "--seed", "1"])
ok(code == 0, "two absorbers found")
inv = by_event(lines, "inventory")[0]
ok(inv["found"] == 2 and inv["vertices_used"] == 70, "disjoint 35 + 35 vertices")
abs_ev = by_event(lines, "absorber")
seen = set(abs_ev[0]["vertices"]) | set(abs_ev[1]["vertices"])
ok(len(seen) == 70, "absorber vertex sets disjoint")
code2, lines2 = run(["absorbers", path_big, "--count", "2", "--seed", "1"])
ok(strip_timings(lines) == strip_timings(lines2), "absorbers deterministic")
# impossible request: 3 disjoint absorbers on 78 vertices needs 105
code, lines = run(["absorbers", path_big, "--count", "3", "--seed", "1",
                   "--budget", "20000"])
ok(code == 2 and by_event(lines, "inventory")[0]["found"] < 3,
   "short inventory exits 2")

# ----- janson
print("== janson")
code, lines = run(["janson", "--preset", "worked-example", "--t-grid", "5"])
ok(code == 0, "worked example exit 0")
pts = by_event(lines, "janson-point")
ok(len(pts) == 5, "t-grid size respected")
ok(pts[0]["t"] == 0.0 and abs(pts[-1]["t"] - 2.0) < 1e-12, "grid spans [0, EX]")
mid = [q for q in pts if abs(q["t"] - 1.0) < 1e-9][0]
ok(abs(mid["bound"] - math.exp(-0.25)) < 1e-12, "bound exp(-1/4) at t=1")
ok(mid["exact_tail"] == 5 / 16, "exact tail 5/16 at t=1")
ok(by_event(lines, "janson-summary")[0]["dominated"] is True, "dominated")

spec_path = os.path.join(tmp, "ws.json")
with open(spec_path, "w") as fh:
    json.dump({"n": 6, "p": 0.3, "weights": [[[0, 1, 2], 1.0], [[2, 3], 0.5]]}, fh)
code, lines = run(["janson", "--spec", spec_path, "--t-grid", "3",
                   "--trials", "2000"])
ok(code == 0, "spec file exit 0")
ok(by_event(lines, "weight-system")[0]["support"] == 2, "spec weights loaded")
ok("mc" in by_event(lines, "janson-point")[0], "MC estimates present")
code2, lines2 = run(["janson", "--spec", spec_path, "--t-grid", "3",
                     "--trials", "2000"])
ok(strip_timings(lines) == strip_timings(lines2), "janson deterministic")

with open(spec_path, "w") as fh:
    fh.write("{broken")
code, lines = run(["janson", "--spec", spec_path])
ok(code == 2 and by_event(lines, "failure"), "broken spec: exit 2")

# ----- scan
print("== scan")
csv_path = os.path.join(tmp, "scan.csv")
code, lines = run(["scan", "--family", "construction_a", "--n", "6,7,9",
                   "--method", "brute", "--out", csv_path])
ok(code == 0, "scan exit 0")
with open(csv_path) as fh:
    rows = fh.read().splitlines()
ok(rows[0] == "family,method,n,p,seed,delta2,delta2_ratio,outcome,cycle_length",
   "CSV header")
ok(len(rows) == 1 + 3, "row count = |n| x |p| x seeds")
ok(any("error:" in r for r in rows if r.startswith("construction_a,brute,7")),
   "invalid n contributes an error row, not a crash")
ok(any(r.startswith("construction_a,brute,9") and ",none," in r for r in rows),
   "construction_a(9) scans to none")
sc = by_event(lines, "scan")[0]
ok(sc["rows"] == 3 == sc["expected_rows"], "accounting event")

code, lines = run(["scan", "--family", "random", "--n", "9:11", "--p",
                   "0.8,1.0", "--seeds", "2", "--method", "brute",
                   "--out", csv_path])
with open(csv_path) as fh:
    text1 = fh.read()
ok(len(text1.splitlines()) == 1 + 2 * 2 * 2, "grid 2x2x2 rows")
ok(text1.splitlines()[1] < text1.splitlines()[2], "rows sorted")
code, lines = run(["scan", "--family", "random", "--n", "9:11", "--p",
                   "0.8,1.0", "--seeds", "2", "--method", "brute",
                   "--out", csv_path])
with open(csv_path) as fh:
    ok(fh.read() == text1, "scan CSV byte-identical on rerun")
# complete host rows found a cycle
ok(any(r.split(",")[3] == "1.0" and r.split(",")[7] == "cycle"
       for r in text1.splitlines()[1:]), "p=1 rows find cycles")

# workers env: same rows
os.environ["HYPERHAM_WORKERS"] = "4"
code, lines = run(["scan", "--family", "random", "--n", "9:11", "--p",
                   "0.8,1.0", "--seeds", "2", "--method", "brute",
                   "--out", csv_path])
del os.environ["HYPERHAM_WORKERS"]
with open(csv_path) as fh:
    ok(fh.read() == text1, "worker count does not change the CSV")

# ----- usage errors stay off stdout and exit 1
print("== usage")
proc = subprocess.run([sys.executable, "-m", "hyperham.cli", "degree"],
                      capture_output=True, text=True)
ok(proc.returncode == 1, "missing args exit 1")
ok(proc.stdout == "", "usage error leaves stdout empty")
ok("error" in proc.stderr, "usage message on stderr")
proc = subprocess.run([sys.executable, "-m", "hyperham.cli", "--version"],
                      capture_output=True, text=True)
ok(proc.returncode == 0 and proc.stdout.startswith("hyperham 0.1.0"),
   "--version prints build info")
ok("kernels:" in proc.stdout, "--version names the backend")
proc = subprocess.run(
    [sys.executable, "-m", "hyperham.cli", "find-cycle", "x", "--method", "bogus"],
    capture_output=True, text=True)
ok(proc.returncode == 1, "bad choice exit 1")

# console entry point
proc = subprocess.run(["hyperham", "--version"], capture_output=True, text=True)
ok(proc.returncode == 0 and proc.stdout.startswith("hyperham"),
   "installed console script works")

print(f"\n{PASS} passed, {FAIL} failed")
sys.exit(1 if FAIL else 0)
