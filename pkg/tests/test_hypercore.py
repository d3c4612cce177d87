"""Core container: canonicalization, text format, degree queries."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hyperham.extremal import random_hypergraph
from hyperham.hypercore import Hypergraph, HypergraphError, ParseError, parse, serialize


def complete(k, n):
    import itertools

    return Hypergraph(k, n, itertools.combinations(range(n), k))


# ------------------------------------------------------------ construction


def test_edges_are_canonicalized_and_deduplicated():
    h = Hypergraph(3, 6, [(2, 1, 0), (0, 1, 2), (5, 3, 4)])
    assert h.edges == ((0, 1, 2), (3, 4, 5))
    assert len(h) == 2
    assert (1, 0, 2) in h
    assert h.has_edge(5, 4, 3)
    assert not h.has_edge(0, 1, 3)


def test_constructor_rejects_bad_edges():
    with pytest.raises(HypergraphError, match="repeated"):
        Hypergraph(3, 6, [(0, 1, 1)])
    with pytest.raises(HypergraphError, match="outside"):
        Hypergraph(3, 6, [(0, 1, 6)])
    with pytest.raises(HypergraphError, match="outside"):
        Hypergraph(3, 6, [(-1, 0, 2)])
    with pytest.raises(HypergraphError):
        Hypergraph(1, 6, [])
    with pytest.raises(HypergraphError):
        Hypergraph(9, 20, [])


def test_empty_hypergraph_is_fine():
    h = Hypergraph(4, 10, [])
    assert h.edges == ()
    assert h.edge_array.shape == (0, 4)
    assert h.min_j_degree(2) == (0, frozenset({0, 1}))


def test_equality_ignores_edge_order():
    a = Hypergraph(3, 5, [(0, 1, 2), (1, 2, 3)])
    b = Hypergraph(3, 5, [(3, 2, 1), (2, 1, 0)])
    assert a == b
    assert hash(a) == hash(b)
    assert a != Hypergraph(3, 6, a.edges)


def test_edge_array_rows_ascending():
    h = random_hypergraph(12, 4, 0.4, seed=3)
    arr = h.edge_array
    assert (arr[:, :-1] < arr[:, 1:]).all()
    assert arr.shape == (len(h), 4)


# ------------------------------------------------------------ text format


def test_round_trip_on_random_hosts():
    for k in (2, 3, 4):
        h = random_hypergraph(10, k, 0.5, seed=k)
        assert parse(serialize(h)) == h


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_round_trip_property(data):
    k = data.draw(st.integers(2, 4))
    n = data.draw(st.integers(k, 9))
    pool = list(__import__("itertools").combinations(range(n), k))
    edges = data.draw(st.lists(st.sampled_from(pool), max_size=len(pool)))
    h = Hypergraph(k, n, edges)
    text = serialize(h)
    assert text.endswith("\n")
    assert parse(text) == h


def test_serialize_is_sorted_and_stable():
    h = Hypergraph(3, 6, [(3, 4, 5), (0, 1, 2), (0, 2, 4)])
    lines = serialize(h).splitlines()
    assert lines[0] == "3 6"
    assert lines[1:] == ["0 1 2", "0 2 4", "3 4 5"]


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("3\n", 1),  # header needs two fields
        ("3 6\n0 1\n", 2),  # wrong arity
        ("3 6\n0 1 6\n", 2),  # out of range
        ("3 6\n2 1 0\n", 2),  # must be ascending
        ("3 6\n0 1 2\n0 1 2\n", 3),  # duplicate edge
        ("3 6\n0 1 2\nx y z\n", 3),  # not integers
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError, match=f"line {lineno}"):
        parse(text)


def test_parse_tolerates_blank_lines_and_comments():
    h = parse("# host\n3 6\n\n0 1 2\n# mid\n3 4 5\n")
    assert h.edges == ((0, 1, 2), (3, 4, 5))


# ------------------------------------------------------------ queries


def test_degree_counts_supersets():
    h = Hypergraph(3, 6, [(0, 1, 2), (0, 1, 3), (0, 2, 4), (3, 4, 5)])
    assert h.degree((0, 1)) == 2
    assert h.degree(frozenset({0})) == 3
    assert h.degree((5,)) == 1
    assert h.degree((0, 1, 2)) == 1
    assert h.degree((1, 5)) == 0


def test_link_drops_anchor_and_keeps_remainders():
    h = Hypergraph(3, 6, [(0, 1, 2), (0, 1, 3), (0, 2, 4), (3, 4, 5)])
    lk = h.link((0,))
    assert lk.k == 2 and lk.n == 6
    assert lk.edge_set == {(1, 2), (1, 3), (2, 4)}
    lk2 = h.link((0, 1))
    assert lk2.k == 1 and lk2.edge_set == {(2,), (3,)}


def test_induced_relabels_and_reports_names():
    h = Hypergraph(3, 6, [(0, 1, 2), (0, 2, 5), (3, 4, 5)])
    sub, names = h.induced([0, 2, 5])
    assert names == (0, 2, 5)
    assert sub.n == 3
    assert sub.edge_set == {(0, 1, 2)}  # the 0-2-5 edge, relabeled


def test_min_j_degree_on_complete_host():
    h = complete(4, 9)
    for j in (1, 2, 3):
        value, witness = h.min_j_degree(j)
        assert value == math.comb(9 - j, 4 - j)
        assert len(witness) == j


@pytest.mark.parametrize("k,n,p,seed", [(3, 8, 0.5, 1), (4, 9, 0.4, 2), (4, 10, 0.7, 3), (2, 9, 0.5, 4)])
def test_min_j_degree_matches_enumeration(k, n, p, seed):
    h = random_hypergraph(n, k, p, seed=seed)
    for j in range(1, k):
        value, witness = h.min_j_degree(j)
        expect, _ = oracles.min_j_degree_enum(k, n, h.edges, j)
        assert value == expect
        assert h.degree(witness) == value


def test_min_j_degree_rejects_bad_j():
    h = complete(4, 8)
    assert h.min_j_degree(4) == (1, frozenset({0, 1, 2, 3}))  # j=k is membership
    for j in (0, 5, -1):
        with pytest.raises(HypergraphError):
            h.min_j_degree(j)
