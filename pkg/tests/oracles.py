"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written the slow, obvious way — plain
permutation/subset enumeration and Python-int arithmetic — and imports
nothing from hyperham, so a library bug cannot hide in its own oracle.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb


def window_edges_ok(vertices, k, edge_set, cyclic):
    """Every k consecutive vertices (wrapping if cyclic) form an edge."""
    vs = list(vertices)
    n = len(vs)
    limit = n if cyclic else n - k + 1
    if limit < 0:
        return False
    for i in range(limit):
        window = [vs[(i + j) % n] for j in range(k)]
        if len(set(window)) != k:
            return False
        if tuple(sorted(window)) not in edge_set:
            return False
    return True


def brute_tight_hamiltonian(k, n, edges):
    """Permutation search for a tight Hamiltonian cycle; None if there is
    none.  First vertex fixed, so feasible up to n ~ 10."""
    edge_set = {tuple(sorted(e)) for e in edges}
    if n < k:
        return None
    for rest in permutations(range(1, n)):
        seq = (0,) + rest
        if window_edges_ok(seq, k, edge_set, cyclic=True):
            return seq
    return None


def min_j_degree_enum(k, n, edges, j):
    """(value, witness) by scoring every j-subset against every edge."""
    counts = {sub: 0 for sub in combinations(range(n), j)}
    for e in edges:
        se = set(e)
        for sub in combinations(sorted(se), j):
            counts[sub] += 1
    witness = min(counts, key=lambda s: (counts[s], s))
    return counts[witness], witness


def walks_length3(n, edge_pairs):
    """Ordered 3-edge walks by a 4-deep loop over the adjacency dict."""
    adj = {v: set() for v in range(n)}
    for u, v in edge_pairs:
        adj[u].add(v)
        adj[v].add(u)
    total = 0
    for a in range(n):
        for b in adj[a]:
            for c in adj[b]:
                total += len(adj[c])
    return total


def janson_moments(n, p, weighted_subsets):
    """(EX, Delta) with Fraction arithmetic over frozenset supports.

    Delta sums w(A) w(B) p^{|A u B|} over ordered pairs with A n B != {}
    (diagonal included), mirroring the bound's correlation mass."""
    p = Fraction(str(p))
    items = [(frozenset(a), Fraction(str(w))) for a, w in weighted_subsets]
    ex = sum((w * p ** len(a) for a, w in items), Fraction(0))
    delta = Fraction(0)
    for a, wa in items:
        for b, wb in items:
            if a & b:
                delta += wa * wb * p ** len(a | b)
    return ex, delta


def exact_lower_tail(n, p, weighted_subsets, threshold):
    """P(X <= threshold) by enumerating all 2^n outcomes exactly."""
    p = Fraction(str(p))
    q = 1 - p
    thr = Fraction(str(threshold))
    items = [(frozenset(a), Fraction(str(w))) for a, w in weighted_subsets]
    total = Fraction(0)
    for bits in range(1 << n):
        present = {v for v in range(n) if bits >> v & 1}
        x = sum((w for a, w in items if a <= present), Fraction(0))
        if x <= thr:
            size = len(present)
            total += p**size * q ** (n - size)
    return total


def pascal(n, k):
    return comb(n, k)
