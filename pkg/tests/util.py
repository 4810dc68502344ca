"""Shared test helpers: brute-force oracles and the graph corpus.

The oracles here deliberately avoid the library's incremental tricks: plain
subset scans and quadratic checks, so they stay independent of the code
paths they validate.
"""

from __future__ import annotations

import random
from fractions import Fraction

from stableseq import graphs
from stableseq.graphs import Graph


def is_independent(g: Graph, mask: int) -> bool:
    m = mask
    while m:
        v = (m & -m).bit_length() - 1
        if g.adj[v] & mask:
            return False
        m &= m - 1
    return True


def brute_sequence(g: Graph) -> list[int]:
    """Counts by size via a scan of all 2^n vertex subsets (n <= 20)."""
    assert g.n <= 20
    counts: dict[int, int] = {}
    for mask in range(1 << g.n):
        if is_independent(g, mask):
            k = mask.bit_count()
            counts[k] = counts.get(k, 0) + 1
    return [counts.get(t, 0) for t in range(max(counts) + 1)]


def brute_side_profile(g: Graph, class_e, class_o) -> dict:
    table: dict[tuple[int, int], int] = {}
    m = len(class_e)
    for mask in range(1 << m):
        picked = [class_e[i] for i in range(m) if mask >> i & 1]
        nb = 0
        for v in picked:
            nb |= g.adj[v]
        nb &= ~sum(1 << v for v in picked)
        key = (len(picked), nb.bit_count())
        table[key] = table.get(key, 0) + 1
    return table


def regular_bipartite_corpus() -> list[tuple[str, Graph, int]]:
    """At least 20 regular bipartite graphs with |V| <= 24."""
    out: list[tuple[str, Graph, int]] = []
    for n in range(4, 26, 2):
        out.append((f"cycle:{n}", graphs.cycle(n), 2))
    for d in range(1, 13):
        out.append((f"knn:{d},{d}", graphs.complete_bipartite(d, d), d))
    out.append(("qd:3", graphs.hypercube(3), 3))
    out.append(("qd:4", graphs.hypercube(4), 4))
    for d in range(3, 9):
        out.append((f"crown:{d}", graphs.crown(d), d - 1))
    out.append(("2*knn:2,2", graphs.disjoint_union(
        graphs.complete_bipartite(2, 2), graphs.complete_bipartite(2, 2)), 2))
    out.append(("3*knn:2,2", graphs.disjoint_union(
        *(graphs.complete_bipartite(2, 2) for _ in range(3))), 2))
    out.append(("2*knn:3,3", graphs.disjoint_union(
        graphs.complete_bipartite(3, 3), graphs.complete_bipartite(3, 3)), 3))
    out.append(("2*knn:4,4", graphs.disjoint_union(
        graphs.complete_bipartite(4, 4), graphs.complete_bipartite(4, 4)), 4))
    out.append(("cycle:4+cycle:8", graphs.disjoint_union(
        graphs.cycle(4), graphs.cycle(8)), 2))
    out.append(("circ:12,1,5", graphs.circulant_bipartite(12, [1, 5]), 4))
    out.append(("circ:16,1,3", graphs.circulant_bipartite(16, [1, 3]), 4))
    out.append(("circ:16,1,3,5", graphs.circulant_bipartite(16, [1, 3, 5]), 6))
    out.append(("circ:20,1,9", graphs.circulant_bipartite(20, [1, 9]), 4))
    out.append(("circ:24,1,5", graphs.circulant_bipartite(24, [1, 5]), 4))
    return out


def bipartite_mask_graph(a: int, b: int, mask: int) -> Graph:
    """Bipartite graph on sides of size a and b from an a*b edge bitmask."""
    edges = []
    for i in range(a):
        for j in range(b):
            if mask >> (i * b + j) & 1:
                edges.append((i, a + j))
    return graphs.from_edges(a + b, edges)


def bipartite_sample(seed: int = 1234, random_count: int = 150):
    """Deterministic sample of bipartite graphs with |V| <= 14: exhaustive
    over small side shapes plus seeded random balanced 7+7 graphs."""
    out = []
    for a, b in ((3, 3), (2, 4)):
        for mask in range(1 << (a * b)):
            out.append(bipartite_mask_graph(a, b, mask))
    rng = random.Random(seed)
    for _ in range(random_count):
        mask = rng.getrandbits(49)
        out.append(bipartite_mask_graph(7, 7, mask))
    return out


def exact_ratio(q: Fraction, digits: int = 6) -> float:
    return round(float(q), digits)
