"""Batch experiment harness over the whole library.

Report protocol: every run writes append-only JSON lines to stdout.  The
first line echoes the command (argv, seed, version, kernel backend), the
last line is a result record with the exit code, and all wall-clock data
lives in lines whose "event" is "timings" — two runs of the same command
line and seed are byte-identical after dropping those lines.

Exit codes: 0 success, 2 structured failure (a complete report is still
written), 1 usage error (argparse-level; nothing on stdout).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields as dataclass_fields

import numpy as np

from . import _kernels
from .absorption import AbsorbError, BuildAbsorbingError, find_absorber_ex
from .concentration import (
    EXACT_N_CAP,
    WeightSystem,
    janson_bound,
    janson_exact_tail,
    janson_mc_tail,
)
from .connectivity import (
    VERIFIER_IDS,
    FamilyBuildError,
    build_family3,
    build_family4,
    connectable_triples,
    verify_counting_lemma,
)
from .connector import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    PreconditionError,
    ReservoirFailure,
    connect4_ex,
)
from .extremal import (
    GenerationError,
    construction_a,
    construction_b,
    random_hypergraph,
)
from .hypercore import Hypergraph, HypergraphError, ParseError, parse, serialize
from .pipeline import (
    PipelineConfig,
    _cycle_digest,
    _py,
    find_hamiltonian_absorption,
)
from .robust import adjacency_from_hypergraph, blakley_roy_gap
from .tightpaths import BRUTE_DEFAULT_CAP, find_tight_hamiltonian_brute

__all__ = ["main"]


def _version() -> str:
    try:
        from importlib.metadata import version

        return version("hyperham")
    except Exception:
        return "0+unknown"


def _build_info() -> str:
    return (
        f"hyperham {_version()} (kernels: {_kernels.BACKEND}; "
        f"available: {', '.join(_kernels.available_backends())})"
    )


def _env_workers() -> int:
    raw = os.environ.get("HYPERHAM_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


class CliFailure(Exception):
    """Structured operation failure: report completed, exit code 2."""

    def __init__(self, reason: str, **details):
        super().__init__(reason)
        self.payload = {"reason": reason, **details}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 is reserved for structured failures
    # here, so command-line problems exit 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _Reporter:
    """JSON-lines sink; one object per line, keys sorted, values plain."""

    def __init__(self, stream=None):
        self.stream = stream if stream is not None else sys.stdout

    def emit(self, event: str, **fields):
        payload = {"event": event}
        payload.update(fields)
        self.raw(json.dumps(_py(payload), sort_keys=True))

    def raw(self, line: str):
        self.stream.write(line + "\n")
        self.stream.flush()


# ------------------------------------------------------------------ helpers


def _sha256(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _load(path: str) -> Hypergraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliFailure(
            "cannot read hypergraph file", file=path, detail=str(exc)
        ) from None
    return parse(text)


def _write_text(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliFailure("cannot write file", file=path, detail=str(exc)) from None


def _int_csv(text: str, what: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise CliFailure(
            f"{what} must be comma-separated integers", got=text
        ) from None


def _int_range(spec: str) -> list:
    """Comma list "6,9,12" or range "40:81" / "40:81:20" (end exclusive)."""
    if ":" in spec:
        parts = spec.split(":")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise CliFailure("bad integer range", got=spec) from None
        if len(nums) == 2:
            start, stop, step = nums[0], nums[1], 1
        elif len(nums) == 3:
            start, stop, step = nums
        else:
            raise CliFailure("range must be start:stop[:step]", got=spec)
        if step <= 0:
            raise CliFailure("range step must be positive", got=spec)
        return list(range(start, stop, step))
    return _int_csv(spec, "integer list")


def _float_csv(spec: str, what: str) -> list:
    try:
        return [float(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise CliFailure(
            f"{what} must be comma-separated numbers", got=spec
        ) from None


def _triple(text: str, what: str) -> tuple:
    vals = _int_csv(text, what)
    if len(vals) != 3:
        raise CliFailure(f"{what} needs exactly 3 vertices", got=vals)
    return tuple(vals)


_CONFIG_FIELDS = frozenset(f.name for f in dataclass_fields(PipelineConfig))


def _read_config(path: str, seed_override) -> PipelineConfig:
    """Flat key = value file mirroring PipelineConfig; unknown keys are
    errors so a typo cannot silently fall back to a default."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliFailure(
            "cannot read config file", file=path, detail=str(exc)
        ) from None
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        elif ":" in line:
            key, _, val = line.partition(":")
        else:
            raise CliFailure(
                "config line is not 'key = value'", file=path, line=lineno, got=raw
            )
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_FIELDS:
            raise CliFailure(
                "unknown config key",
                file=path,
                line=lineno,
                key=key,
                known=sorted(_CONFIG_FIELDS),
            )
        if key in values:
            raise CliFailure("duplicate config key", file=path, line=lineno, key=key)
        try:
            values[key] = json.loads(val)
        except json.JSONDecodeError:
            values[key] = val  # bare words, e.g. mode = desk
    if seed_override is not None:
        values["seed"] = seed_override
    return PipelineConfig(**values)


def _write_cycle_file(path: str, h: Hypergraph, vertices, digest: str, out):
    doc = {
        "kind": "tight-cycle",
        "k": h.k,
        "n": h.n,
        "vertices": [int(v) for v in vertices],
        "digest": digest,
    }
    text = json.dumps(doc, sort_keys=True) + "\n"
    _write_text(path, text)
    out.emit("artifact", path=path, digest=_sha256(text))


# ------------------------------------------------------------------ handlers


def _cmd_gen(args, out, timings):
    t0 = time.perf_counter()
    partition = None
    if args.family == "random":
        h = random_hypergraph(args.n, args.k, args.p, seed=args.seed)
    else:
        builder = construction_a if args.family == "construction_a" else construction_b
        h, part = builder(args.n)
        partition = {
            "x": sorted(part.x),
            "y": sorted(part.y),
            "forbidden_intersection": part.forbidden_intersection,
        }
    timings["generate"] = (time.perf_counter() - t0) * 1000.0
    text = serialize(h)
    _write_text(args.out, text)
    out.emit(
        "generated",
        family=args.family,
        n=h.n,
        k=h.k,
        edges=len(h.edges),
        p=args.p if args.family == "random" else None,
        out=args.out,
        digest=_sha256(text),
        partition=partition,
    )
    return 0


def _cmd_degree(args, out, timings):
    h = _load(args.file)
    t0 = time.perf_counter()
    value, witness = h.min_j_degree(args.j)
    timings["degree"] = (time.perf_counter() - t0) * 1000.0
    out.emit(
        "degree",
        file=args.file,
        n=h.n,
        k=h.k,
        j=args.j,
        delta=value,
        witness=sorted(witness),
    )
    return 0


def _cmd_find_cycle(args, out, timings):
    h = _load(args.file)
    if args.method == "brute":
        t0 = time.perf_counter()
        res = find_tight_hamiltonian_brute(h, budget=args.budget, n_cap=args.n_cap)
        timings["search"] = (time.perf_counter() - t0) * 1000.0
        out.emit(
            "search",
            method="brute",
            n=h.n,
            k=h.k,
            status=res.status,
            exhaustive=res.status == "none",
            expansions=res.expansions,
            budget=args.budget,
        )
        if res.status != "found":
            return 2
        vs = list(res.cycle.vertices)
        digest = _cycle_digest(tuple(vs))
        out.emit("cycle", vertices=vs, length=len(vs), digest=digest)
        if args.out:
            _write_cycle_file(args.out, h, vs, digest, out)
        return 0

    if args.config:
        cfg = _read_config(args.config, args.seed)
    else:
        cfg = PipelineConfig(seed=args.seed if args.seed is not None else 0)
    t0 = time.perf_counter()
    result = find_hamiltonian_absorption(h, cfg)
    timings["pipeline"] = (time.perf_counter() - t0) * 1000.0
    for line in result.report_lines():
        out.raw(line)
    if not result.ok:
        return 2
    if args.out:
        _write_cycle_file(args.out, h, list(result.cycle.vertices), result.digest, out)
    return 0


def _cmd_verify(args, out, timings):
    t0 = time.perf_counter()
    if args.lemma == "blakley-roy":
        h = _load(args.file)
        gap = blakley_roy_gap(adjacency_from_hypergraph(h))
        timings["verify"] = (time.perf_counter() - t0) * 1000.0
        out.emit(
            "verifier",
            lemma="blakley-roy",
            mode=args.mode,
            n=h.n,
            walks=gap.walks,
            bound=gap.bound,
            gap=gap.gap,
            **{"pass": gap.holds_exactly},
        )
        return 0 if gap.holds_exactly else 2

    if args.lemma == "L36":
        g = adjacency_from_hypergraph(_load(args.file))
        other = args.file_prime if args.file_prime else args.file
        gp = adjacency_from_hypergraph(_load(other))
        if args.u is None:
            raise CliFailure("L36 needs --u (comma-separated vertex set)")
        instance = {
            "g": g,
            "g_prime": gp,
            "u": _int_csv(args.u, "--u"),
            "alpha": args.alpha,
        }
    elif args.lemma in ("F41", "NB3", "L35"):
        h3 = _load(args.file)
        fam = build_family3(h3, args.alpha, args.beta, args.ell, args.mu, args.mode)
        instance = {"family3": fam, "zeta": args.zeta, "alpha": args.alpha}
        if args.lemma == "L35":
            instance["h_prime"] = _load(args.file_prime) if args.file_prime else h3
            if args.v_prime is not None:
                instance["v_prime"] = _int_csv(args.v_prime, "--v-prime")
    else:
        h4 = _load(args.file)
        fam = build_family4(h4, args.alpha, args.beta, args.ell, args.mu, args.mode)
        instance = {"family4": fam, "zeta": args.zeta, "alpha": args.alpha}

    rep = verify_counting_lemma(args.lemma, instance, mode=args.mode)
    timings["verify"] = (time.perf_counter() - t0) * 1000.0
    out.emit("verifier", **rep.to_dict())
    return 0 if rep.pass_ is not False else 2


def _cmd_connect(args, out, timings):
    h = _load(args.file)
    ta = _triple(args.triple_a, "--triple-a")
    tb = _triple(args.triple_b, "--triple-b")
    t0 = time.perf_counter()
    fam = build_family4(h, args.alpha, args.beta, args.ell, args.mu)
    idx = connectable_triples(fam, args.zeta)
    timings["family"] = (time.perf_counter() - t0) * 1000.0
    allowed = None
    if args.allowed is not None:
        members = _int_csv(args.allowed, "--allowed")
        allowed = np.zeros(h.n, dtype=bool)
        for v in members:
            if not (0 <= v < h.n):
                raise CliFailure("--allowed vertex out of range", vertex=v, n=h.n)
            allowed[v] = True
    t1 = time.perf_counter()
    path, diag = connect4_ex(
        h,
        fam,
        idx,
        ta,
        tb,
        residue=args.residue,
        inner_count=args.inner,
        allowed=allowed,
        budget=args.budget,
        seed=args.seed,
    )
    timings["connect"] = (time.perf_counter() - t1) * 1000.0
    out.emit("connect", found=path is not None, diag=diag)
    if path is None:
        return 2
    vs = list(path.vertices)
    out.emit("path", vertices=vs, length=len(vs), inner=len(vs) - 6)
    return 0


def _cmd_absorbers(args, out, timings):
    h = _load(args.file)
    t0 = time.perf_counter()
    fam = build_family4(h, args.alpha, args.beta, args.ell, args.mu)
    idx = connectable_triples(fam, args.zeta)
    timings["family"] = (time.perf_counter() - t0) * 1000.0
    targets = None
    if args.targets is not None:
        targets = _int_csv(args.targets, "--targets")
        if len(targets) != 4:
            raise CliFailure("--targets needs exactly 4 vertices", got=targets)
        targets = tuple(targets)
    rng = np.random.default_rng(args.seed)
    forbidden: set = set()
    found = 0
    t1 = time.perf_counter()
    for i in range(args.count):
        ab, diag = find_absorber_ex(
            h,
            fam,
            idx,
            a_vec=targets,
            forbidden=sorted(forbidden),
            budget=args.budget,
            seed=int(rng.integers(2**62)),
        )
        if ab is None:
            out.emit("absorber", index=i, found=False, diag=diag)
            continue
        forbidden |= set(ab.vertices)
        found += 1
        out.emit(
            "absorber",
            index=i,
            found=True,
            vertices=list(ab.vertices),
            swap_targets=list(targets) if targets else None,
            diag=diag,
        )
    timings["search"] = (time.perf_counter() - t1) * 1000.0
    out.emit(
        "inventory",
        requested=args.count,
        found=found,
        vertices_used=len(forbidden),
    )
    return 0 if found == args.count else 2


_JANSON_PRESETS = ("worked-example", "singletons", "pairs")


def _cmd_janson(args, out, timings):
    if args.preset is not None:
        if args.preset == "worked-example":
            ws = WeightSystem.singletons(4, 0.5)
        elif args.preset == "singletons":
            ws = WeightSystem.singletons(args.n, args.p)
        else:
            ws = WeightSystem.on_k_sets(args.n, 2, args.p)
        source = {"preset": args.preset}
    else:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise CliFailure(
                "cannot read spec file", file=args.spec, detail=str(exc)
            ) from None
        except json.JSONDecodeError as exc:
            raise CliFailure(
                "spec file is not valid JSON", file=args.spec, detail=str(exc)
            ) from None
        if not isinstance(doc, dict) or not {"n", "p", "weights"} <= set(doc):
            raise CliFailure(
                'janson spec needs {"n": int, "p": float,'
                ' "weights": [[subset, weight], ...]}',
                file=args.spec,
            )
        try:
            pairs = [(tuple(a), w) for a, w in doc["weights"]]
        except (TypeError, ValueError):
            raise CliFailure(
                "weights must be [subset, weight] pairs", file=args.spec
            ) from None
        ws = WeightSystem(doc["n"], doc["p"], pairs)
        source = {"spec": args.spec}

    ex = ws.expectation
    exact_available = ws.n <= EXACT_N_CAP
    out.emit("weight-system", EX=ex, exact_available=exact_available,
             **ws.to_dict(), **source)
    grid = max(2, args.t_grid)
    workers = _env_workers()
    dominated = True
    t0 = time.perf_counter()
    for i in range(grid):
        t = ex * i / (grid - 1)
        jb = janson_bound(ws, t)
        point = {
            "t": t,
            "EX": jb.ex,
            "Delta": jb.delta,
            "bound": jb.bound,
            "degenerate": jb.degenerate,
        }
        if exact_available:
            tail = janson_exact_tail(ws, t)
            point["exact_tail"] = tail
            point["dominated"] = bool(tail <= jb.bound + 1e-12)
            dominated = dominated and point["dominated"]
        if args.trials > 0:
            est = janson_mc_tail(
                ws, t, args.trials, seed=args.seed + i, workers=workers
            )
            point["mc"] = {
                "estimate": est.estimate,
                "ci_low": est.ci_low,
                "ci_high": est.ci_high,
                "trials": est.trials,
            }
        out.emit("janson-point", **point)
    timings["grid"] = (time.perf_counter() - t0) * 1000.0
    out.emit(
        "janson-summary",
        points=grid,
        EX=ex,
        exact_available=exact_available,
        dominated=dominated if exact_available else None,
    )
    return 0 if (not exact_available or dominated) else 2


_SCAN_HEADER = (
    "family",
    "method",
    "n",
    "p",
    "seed",
    "delta2",
    "delta2_ratio",
    "outcome",
    "cycle_length",
)


def _scan_cell(args, n: int, p: float, seed: int) -> dict:
    row = {
        "family": args.family,
        "method": args.method,
        "n": n,
        "p": p,
        "seed": seed,
        "delta2": "",
        "delta2_ratio": "",
        "outcome": "",
        "cycle_length": "",
    }
    try:
        if args.family == "random":
            h = random_hypergraph(n, 4, p, seed=seed)
        else:
            h, _ = construction_a(n)
    except (HypergraphError, GenerationError) as exc:
        row["outcome"] = "error:" + type(exc).__name__
        return row
    d2, _ = h.min_j_degree(2)
    row["delta2"] = d2
    row["delta2_ratio"] = "%.6f" % (d2 / (n * n / 2))  # compare against 5/9
    try:
        if args.method == "brute":
            res = find_tight_hamiltonian_brute(h, budget=args.budget)
            row["outcome"] = res.status
            if res.status == "found":
                row["outcome"] = "cycle"
                row["cycle_length"] = len(res.cycle.vertices)
        else:
            result = find_hamiltonian_absorption(h, PipelineConfig(seed=seed))
            if result.ok:
                row["outcome"] = "cycle"
                row["cycle_length"] = len(result.cycle.vertices)
            else:
                row["outcome"] = "failure:" + result.stage
    except (HypergraphError, GenerationError) as exc:
        row["outcome"] = "error:" + type(exc).__name__
    return row


def _cmd_scan(args, out, timings):
    n_list = _int_range(args.n)
    p_list = _float_csv(args.p, "--p")
    if not n_list or not p_list:
        raise CliFailure("scan needs nonempty --n and --p grids")
    if args.seeds < 1:
        raise CliFailure("--seeds must be >= 1", got=args.seeds)
    cells = [(n, p, s) for n in n_list for p in p_list for s in range(args.seeds)]
    workers = _env_workers()
    t0 = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda c: _scan_cell(args, *c), cells))
    else:
        rows = [_scan_cell(args, *c) for c in cells]
    timings["cells"] = (time.perf_counter() - t0) * 1000.0
    rows.sort(key=lambda r: (r["n"], r["p"], r["seed"]))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_SCAN_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
        out.emit("cell", **row)
    text = buf.getvalue()
    _write_text(args.out, text)
    out.emit(
        "scan",
        rows=len(rows),
        expected_rows=len(n_list) * len(p_list) * args.seeds,
        out=args.out,
        digest=_sha256(text),
        workers=workers,
    )
    return 0


# -------------------------------------------------------------------- parser


def _add_family_options(p, zeta_default: float):
    p.add_argument("--alpha", type=float, default=0.15)
    p.add_argument("--beta", type=float, default=1e-6)
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--mu", type=float, default=None,
                   help="robustness scale (default alpha^3/18)")
    p.add_argument("--zeta", type=float, default=zeta_default)


def _build_parser() -> _Parser:
    top = _Parser(prog="hyperham", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=_build_info())
    sub = top.add_subparsers(dest="cmd", required=True, metavar="COMMAND")

    g = sub.add_parser("gen", help="write a hypergraph file")
    g.add_argument("family", choices=("construction_a", "construction_b", "random"))
    g.add_argument("n", type=int)
    g.add_argument("--k", type=int, default=4,
                   help="uniformity for random hosts (default 4)")
    g.add_argument("--p", type=float, default=0.5,
                   help="edge probability; random hosts only (p=1 is complete)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(handler=_cmd_gen)

    d = sub.add_parser("degree", help="minimum j-degree with a witness")
    d.add_argument("file")
    d.add_argument("--j", type=int, required=True)
    d.set_defaults(handler=_cmd_degree)

    f = sub.add_parser("find-cycle", help="search for a tight Hamiltonian cycle")
    f.add_argument("file")
    f.add_argument("--method", choices=("brute", "pipeline"), default="pipeline")
    f.add_argument("--config", default=None,
                   help="flat key = value file with pipeline settings")
    f.add_argument("--seed", type=int, default=None,
                   help="overrides the config seed (default 0)")
    f.add_argument("--budget", type=int, default=10**8,
                   help="expansion budget for --method brute")
    f.add_argument("--n-cap", type=int, default=BRUTE_DEFAULT_CAP,
                   help="refuse brute search above this n")
    f.add_argument("--out", default=None, help="write the cycle as JSON here")
    f.set_defaults(handler=_cmd_find_cycle)

    v = sub.add_parser("verify", help="counting / walk inequality verifiers")
    v.add_argument("--lemma", required=True, choices=VERIFIER_IDS + ("blakley-roy",))
    v.add_argument("file")
    v.add_argument("--file-prime", default=None,
                   help="second host for L35 / L36 (defaults to FILE)")
    v.add_argument("--u", default=None, help="L36 vertex subset, comma-separated")
    v.add_argument("--v-prime", default=None,
                   help="L35 vertex subset, comma-separated")
    v.add_argument("--mode", choices=("desk", "asymptotic"), default="desk")
    _add_family_options(v, zeta_default=0.05)
    v.set_defaults(handler=_cmd_verify)

    c = sub.add_parser("connect", help="tight path between two connectable triples")
    c.add_argument("file")
    c.add_argument("--triple-a", required=True, help="ordered, comma-separated")
    c.add_argument("--triple-b", required=True, help="ordered, comma-separated")
    pick = c.add_mutually_exclusive_group(required=True)
    pick.add_argument("--residue", type=int, default=None,
                      help="use the length-menu count for this residue (1..4)")
    pick.add_argument("--inner", type=int, default=None,
                      help="exact inner-vertex count")
    c.add_argument("--allowed", default=None,
                   help="restrict inner vertices to this comma-separated set")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--seed", type=int, default=0)
    _add_family_options(c, zeta_default=0.05)
    c.set_defaults(handler=_cmd_connect)

    a = sub.add_parser("absorbers", help="inventory of disjoint absorbers")
    a.add_argument("file")
    a.add_argument("--count", type=int, default=1)
    a.add_argument("--targets", default=None,
                   help="4 swap-target vertices, comma-separated")
    a.add_argument("--budget", type=int, default=60_000, help="per absorber")
    a.add_argument("--seed", type=int, default=0)
    _add_family_options(a, zeta_default=0.05)
    a.set_defaults(handler=_cmd_absorbers)

    j = sub.add_parser("janson", help="lower-tail bounds against exact/MC oracles")
    src = j.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", default=None, help="JSON weight-system file")
    src.add_argument("--preset", choices=_JANSON_PRESETS, default=None)
    j.add_argument("--n", type=int, default=10, help="preset ground-set size")
    j.add_argument("--p", type=float, default=0.5, help="preset inclusion probability")
    j.add_argument("--t-grid", type=int, default=9, help="points over [0, EX]")
    j.add_argument("--trials", type=int, default=0,
                   help="Monte-Carlo trials per point (0 = skip)")
    j.add_argument("--seed", type=int, default=0)
    j.set_defaults(handler=_cmd_janson)

    s = sub.add_parser("scan", help="grid of cycle searches, CSV output")
    s.add_argument("--family", required=True, choices=("construction_a", "random"))
    s.add_argument("--n", required=True,
                   help="comma list '6,9,12' or range '40:81:20'")
    s.add_argument("--p", default="0.9", help="comma list of edge probabilities")
    s.add_argument("--seeds", type=int, default=1,
                   help="per cell: seeds 0..S-1 drive generation and search")
    s.add_argument("--method", choices=("pipeline", "brute"), default="pipeline")
    s.add_argument("--budget", type=int, default=10**8,
                   help="expansion budget for --method brute")
    s.add_argument("--out", required=True, help="CSV path")
    s.set_defaults(handler=_cmd_scan)

    return top


_FAILURES = (
    HypergraphError,  # ParseError and PreconditionError subclass it
    ParseError,
    GenerationError,
    FamilyBuildError,
    PreconditionError,
    ReservoirFailure,
    BudgetExceeded,
    AbsorbError,
    BuildAbsorbingError,
)


def main(argv=None) -> int:
    args_list = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    args = parser.parse_args(args_list)
    out = _Reporter()
    timings: dict = {}
    out.emit(
        "command",
        argv=args_list,
        subcommand=args.cmd,
        seed=getattr(args, "seed", None),
        version=_version(),
        backend=_kernels.BACKEND,
    )
    t_start = time.perf_counter()
    try:
        code = args.handler(args, out, timings)
    except CliFailure as exc:
        out.emit("failure", **exc.payload)
        code = 2
    except _FAILURES as exc:
        out.emit("failure", error=type(exc).__name__, detail=str(exc))
        code = 2
    timings["total"] = (time.perf_counter() - t_start) * 1000.0
    out.emit("timings", ms={k: round(v, 3) for k, v in timings.items()})
    out.emit("result", exit_code=code, ok=code == 0)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
