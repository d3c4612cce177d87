"""Lower-bound constructions and random host generators."""

import itertools
import math

import numpy as np
import pytest

import oracles
from hyperham.extremal import (
    GenerationError,
    construction_a,
    construction_b,
    random_hypergraph,
    random_with_min_pair_degree,
)
from hyperham.hypercore import HypergraphError


@pytest.mark.parametrize("n", [6, 9, 12, 15])
@pytest.mark.parametrize("builder,forbidden", [(construction_a, 2), (construction_b, 3)])
def test_partition_constructions_forbid_one_trace_size(n, builder, forbidden):
    h, part = builder(n)
    assert part.forbidden_intersection == forbidden
    x = set(part.x)
    y = set(part.y)
    assert len(x) == 2 * n // 3 and len(y) == n // 3
    assert x | y == set(range(n)) and not (x & y)
    # edge set is exactly "all 4-sets except the forbidden trace size"
    expect = {
        e
        for e in itertools.combinations(range(n), 4)
        if len(x.intersection(e)) != forbidden
    }
    assert h.edge_set == expect


@pytest.mark.parametrize("n", [5, 7, 8, 10, 0, 3])
def test_constructions_need_n_divisible_by_three(n):
    for builder in (construction_a, construction_b):
        with pytest.raises(HypergraphError):
            builder(n)


@pytest.mark.parametrize("n", [6, 9, 12])
def test_construction_pair_degrees_match_enumeration(n):
    for builder in (construction_a, construction_b):
        h, _ = builder(n)
        value, witness = h.min_j_degree(2)
        expect, _ = oracles.min_j_degree_enum(4, n, h.edges, 2)
        assert value == expect
        assert h.degree(witness) == value


def test_construction_a_pair_degree_closed_form():
    # worst pair is inside Y: it only misses the 2-in-X completions
    for n in (6, 9, 12, 15):
        h, part = construction_a(n)
        x = len(part.x)
        value, _ = h.min_j_degree(2)
        assert value == math.comb(n - 2, 2) - math.comb(x, 2)


# ------------------------------------------------------------ random hosts


def test_random_hypergraph_is_deterministic():
    a = random_hypergraph(12, 4, 0.6, seed=9)
    b = random_hypergraph(12, 4, 0.6, seed=9)
    c = random_hypergraph(12, 4, 0.6, seed=10)
    assert a == b
    assert a != c


@pytest.mark.parametrize("k", [2, 3, 4])
def test_random_hypergraph_density_extremes(k):
    full = random_hypergraph(9, k, 1.0, seed=0)
    empty = random_hypergraph(9, k, 0.0, seed=0)
    assert len(full.edges) == math.comb(9, k)
    assert empty.edges == ()


def test_random_hypergraph_rejects_bad_arguments():
    with pytest.raises(HypergraphError):
        random_hypergraph(10, 4, 1.5, seed=0)
    with pytest.raises(HypergraphError):
        random_hypergraph(10, 4, -0.1, seed=0)
    with pytest.raises(HypergraphError):
        random_hypergraph(10, 1, 0.5, seed=0)


def test_random_hypergraph_density_is_plausible():
    h = random_hypergraph(14, 4, 0.35, seed=21)
    total = math.comb(14, 4)
    mean = 0.35 * total
    sd = math.sqrt(total * 0.35 * 0.65)
    assert abs(len(h.edges) - mean) < 5 * sd


# ------------------------------------------------ min-pair-degree generator


def test_min_pair_degree_generator_meets_target():
    target = 55
    res = random_with_min_pair_degree(14, target, 0.8, seed=4)
    value, _ = res.hypergraph.min_j_degree(2)
    assert value >= target
    assert res.repairs >= 0 and res.resamples >= 0


def test_min_pair_degree_generator_is_deterministic():
    a = random_with_min_pair_degree(13, 40, 0.75, seed=8)
    b = random_with_min_pair_degree(13, 40, 0.75, seed=8)
    assert a.hypergraph == b.hypergraph
    assert (a.repairs, a.resamples) == (b.repairs, b.resamples)


def test_min_pair_degree_target_bounds():
    cap = math.comb(12, 2)  # C(n-2, 2) at n=14
    res = random_with_min_pair_degree(14, cap, 0.9, seed=1)
    assert res.hypergraph.min_j_degree(2)[0] == cap  # forced complete
    with pytest.raises(HypergraphError):
        random_with_min_pair_degree(14, cap + 1, 0.9, seed=1)
    with pytest.raises(HypergraphError):
        random_with_min_pair_degree(14, -1, 0.9, seed=1)
