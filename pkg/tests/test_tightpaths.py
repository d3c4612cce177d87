"""Tight walks/paths/cycles, the brute cycle search, splicing, path covers."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hyperham.extremal import construction_a, construction_b, random_hypergraph
from hyperham.hypercore import Hypergraph, HypergraphError
from hyperham.tightpaths import (
    BRUTE_DEFAULT_CAP,
    SpliceError,
    TightCycle,
    TightPath,
    end_triples,
    find_tight_hamiltonian_brute,
    greedy_path_cover,
    is_valid,
    splice,
    validate,
)


def complete(k, n):
    return Hypergraph(k, n, itertools.combinations(range(n), k))


# ------------------------------------------------------------- validation


def test_validate_certificate_lists_every_window():
    h = complete(4, 8)
    cert = validate(TightPath(4, (0, 1, 2, 3, 4, 5)), h)
    assert cert.ok
    assert cert.windows == ((0, 1, 2, 3), (1, 2, 3, 4), (2, 3, 4, 5))
    cyc = validate((0, 1, 2, 3, 4), h, "cycle")
    assert cyc.ok and len(cyc.windows) == 5


def test_validate_reports_first_failing_window():
    h = Hypergraph(3, 6, [(0, 1, 2), (1, 2, 3)])
    bad = validate((0, 1, 2, 3, 4), h, "path")
    assert not bad.ok
    assert bad.reason == "window"
    assert bad.window_index == 2 and bad.window == (2, 3, 4)


def test_validate_reports_duplicates_for_paths_not_walks():
    h = complete(3, 6)
    dup = validate((0, 1, 2, 0), h, "path")
    assert not dup.ok and dup.reason == "duplicate" and dup.vertex == 0
    walk = validate((0, 1, 2, 0), h, "walk")
    assert walk.ok  # walks may repeat vertices


def test_validate_argument_errors():
    h = complete(3, 6)
    with pytest.raises(HypergraphError):
        validate((0, 1), h, "path")  # too short
    with pytest.raises(HypergraphError):
        validate((0, 1, 2), h, "cycle")  # cycle needs k+1
    with pytest.raises(HypergraphError):
        validate((0, 1, 9), h, "path")  # out of range
    with pytest.raises(HypergraphError):
        validate((0, 1, 2, 3), h, "loop")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_validate_agrees_with_window_oracle(data):
    k = data.draw(st.integers(3, 4))
    n = data.draw(st.integers(k + 2, 9))
    h = random_hypergraph(n, k, data.draw(st.sampled_from([0.4, 0.7, 0.9])), seed=data.draw(st.integers(0, 50)))
    vs = data.draw(st.permutations(range(n)))
    vs = tuple(vs[: data.draw(st.integers(k + 1, n))])
    for kind in ("path", "cycle"):
        assert is_valid(vs, h, kind) == oracles.window_edges_ok(
            vs, k, h.edge_set, cyclic=(kind == "cycle")
        )


def test_end_triples_forms():
    p = TightPath(4, (3, 1, 4, 5, 9, 2, 6))
    assert end_triples(p) == ((3, 1, 4), (9, 2, 6))
    assert end_triples([3, 1, 4, 5], k=4) == ((3, 1, 4), (1, 4, 5))
    with pytest.raises(HypergraphError):
        end_triples([1, 2], k=4)
    with pytest.raises(HypergraphError):
        end_triples([1, 2, 3])  # raw sequence needs k


# ------------------------------------------------------------------ splice


def test_splice_joins_through_connector():
    h = complete(4, 12)
    p = TightPath(4, (0, 1, 2, 3))
    q = TightPath(4, (6, 7, 8, 9))
    conn = (1, 2, 3, 10, 11, 6, 7, 8)
    joined = splice(p, q, conn, h)
    assert joined.vertices == (0, 1, 2, 3, 10, 11, 6, 7, 8, 9)
    assert is_valid(joined, h)


def test_splice_rejects_mismatched_or_overlapping_connectors():
    h = complete(4, 12)
    p = TightPath(4, (0, 1, 2, 3))
    q = TightPath(4, (6, 7, 8, 9))
    with pytest.raises(SpliceError, match="start"):
        splice(p, q, (9, 2, 3, 10, 6, 7, 8), h)
    with pytest.raises(SpliceError, match="end"):
        splice(p, q, (1, 2, 3, 10, 6, 7, 11), h)
    with pytest.raises(SpliceError) as exc:
        splice(p, q, (1, 2, 3, 0, 11, 6, 7, 8), h)  # reuses 0 from p
    assert exc.value.vertex == 0


# ------------------------------------------------------------- brute search


@pytest.mark.parametrize("k,n,p,seed", [(3, 7, 0.6, 0), (3, 8, 0.5, 3), (4, 8, 0.7, 1), (4, 8, 0.45, 7), (4, 9, 0.8, 5)])
def test_brute_agrees_with_permutation_oracle(k, n, p, seed):
    h = random_hypergraph(n, k, p, seed=seed)
    res = find_tight_hamiltonian_brute(h)
    expect = oracles.brute_tight_hamiltonian(k, n, h.edge_set)
    if expect is None:
        assert res.status == "none" and res.cycle is None
    else:
        assert res.status == "found"
        assert validate(res.cycle, h, "cycle").ok
        assert len(set(res.cycle.vertices)) == n
    assert res.exhaustive


def test_brute_finds_complete_host_cycle():
    res = find_tight_hamiltonian_brute(complete(4, 9))
    assert res.status == "found"
    assert res.cycle.vertices[0] == 0  # anchored canonical form


@pytest.mark.parametrize("builder", [construction_a, construction_b])
def test_brute_proves_constructions_acyclic_at_nine(builder):
    h, _ = builder(9)
    res = find_tight_hamiltonian_brute(h)
    assert res.status == "none"
    assert res.expansions > 0


def test_brute_budget_timeout_and_cap():
    h = complete(4, 10)
    res = find_tight_hamiltonian_brute(h, budget=3)
    assert res.status == "timeout" and not res.exhaustive and res.cycle is None
    with pytest.raises(HypergraphError, match="cap"):
        find_tight_hamiltonian_brute(complete(4, BRUTE_DEFAULT_CAP + 1))
    with pytest.raises(HypergraphError):
        find_tight_hamiltonian_brute(h, budget=0)
    with pytest.raises(HypergraphError):
        find_tight_hamiltonian_brute(complete(5, 9))


# ---------------------------------------------------------------- covers


def _check_cover(h, cr, excluded, m):
    seen = set()
    for path in cr.paths:
        assert len(path.vertices) == m
        assert validate(path, h, "path").ok
        vs = set(path.vertices)
        assert not (vs & excluded)
        assert not (vs & seen)
        seen |= vs
    assert cr.uncovered == frozenset(range(h.n)) - seen - excluded
    return seen


def test_cover_on_complete_host_is_near_perfect():
    h = complete(4, 23)
    excluded = frozenset({0, 5, 9})
    cr = greedy_path_cover(h, excluded, m_vertices=5)
    _check_cover(h, cr, excluded, 5)
    assert len(cr.paths) == 4  # 20 free vertices / 5
    assert cr.maximal_certified
    assert len(cr.uncovered) == 0


def test_cover_respects_callable_end_predicate():
    h = complete(4, 14)
    good = {1, 2, 3, 4, 5, 6}
    pred = lambda tup: set(tup) <= good
    cr = greedy_path_cover(h, frozenset(), 5, end_predicate=pred)
    for path in cr.paths:
        a, b = end_triples(path)
        assert set(a) <= good and set(b) <= good


def test_cover_array_predicate_matches_callable():
    h = random_hypergraph(11, 4, 0.9, seed=2)
    good = {0, 2, 4, 6, 8, 10}
    pred = lambda tup: tup[0] in good
    from hyperham import _kernels as kernels

    arr = np.zeros(h.n ** 3, dtype=np.uint8)
    for tup in itertools.permutations(range(h.n), 3):
        if pred(tup):
            arr[kernels.ordered_rank(tup, h.n)] = 1
    ca = greedy_path_cover(h, frozenset(), 5, end_predicate=pred)
    cb = greedy_path_cover(h, frozenset(), 5, end_predicate=arr)
    assert [p.vertices for p in ca.paths] == [p.vertices for p in cb.paths]
    assert ca.expansions == cb.expansions


def test_cover_argument_validation():
    h = complete(4, 12)
    with pytest.raises(HypergraphError):
        greedy_path_cover(h, frozenset(), 4)  # needs m >= k+1
    with pytest.raises(HypergraphError):
        greedy_path_cover(h, frozenset({12}), 5)  # excluded out of range
    with pytest.raises(HypergraphError):
        greedy_path_cover(h, frozenset(), 5, end_predicate=np.ones(7, dtype=np.uint8))


def test_cover_deterministic_and_budget_aware():
    h = random_hypergraph(15, 4, 0.85, seed=6)
    a = greedy_path_cover(h, frozenset({1}), 6)
    b = greedy_path_cover(h, frozenset({1}), 6)
    assert [p.vertices for p in a.paths] == [p.vertices for p in b.paths]
    tiny = greedy_path_cover(h, frozenset({1}), 6, budget=2)
    assert not tiny.maximal_certified
