"""Exact computation of independent-set counts by size.

Two backends:

* general: recursive branch-and-count on a maximum-degree vertex, using
  seq(G) = seq(G - v) + shift_1(seq(G - N[v])), pure branching with no
  memoization;
* bipartite: side-profile enumeration.  Every independent set is a subset
  A of one class plus an arbitrary subset of the other class avoiding N(A),
  so i_t(G) = sum over A of C(|O| - |N(A)|, t - |A|), grouped by the joint
  profile (|A|, |N(A)|).

All counts are arbitrary-precision integers; this module contains no
floating point.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graphs import Bipartition, Graph, GraphError, NotBipartiteError, bipartition
from .numerics import binom, bits_of, popcount

# The general cap covers the 49-vertex claw-composite fixture, a first-class
# input of the exact counter.
GENERAL_BACKEND_CAP = 50
SIDE_BACKEND_CAP = 28


@dataclass(frozen=True)
class IndSetSequence:
    """Counts of independent sets by size, index 0 .. alpha."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts or self.counts[0] != 1:
            raise ValueError("a count sequence starts with i_0 = 1")
        if len(self.counts) > 1 and self.counts[-1] <= 0:
            raise ValueError("trailing count must be positive")
        if any(c < 0 for c in self.counts):
            raise ValueError("negative count")

    @property
    def alpha(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, t: int) -> int:
        return self.counts[t]

    def __len__(self) -> int:
        return len(self.counts)

    def to_json_dict(self, graph_spec: Optional[str] = None) -> dict:
        meta = {
            "alpha": self.alpha,
            "total": str(self.total),
            "counts": [str(c) for c in self.counts],
        }
        if graph_spec is not None:
            meta["graph"] = graph_spec
        return meta

    @classmethod
    def from_json_dict(cls, data: dict) -> "IndSetSequence":
        seq = cls(tuple(int(c) for c in data["counts"]))
        if "total" in data and int(data["total"]) != seq.total:
            raise ValueError("total does not match counts")
        if "alpha" in data and int(data["alpha"]) != seq.alpha:
            raise ValueError("alpha does not match counts")
        return seq

    def to_json(self, graph_spec: Optional[str] = None) -> str:
        return json.dumps(self.to_json_dict(graph_spec), sort_keys=True)


def polynomial_eval(seq: IndSetSequence, lam) -> Fraction:
    """Exact value of sum_t i_t * lam**t at rational lam."""
    lam = Fraction(lam)
    acc = Fraction(0)
    power = Fraction(1)
    for c in seq.counts:
        acc += c * power
        power *= lam
    return acc


@dataclass(frozen=True)
class SideProfile:
    """Joint distribution of (|A|, |N(A)|) over all subsets A of classE."""

    table: dict[tuple[int, int], int]
    class_e_size: int
    class_o_size: int

    def total(self) -> int:
        return sum(self.table.values())

    def to_json_dict(self) -> dict:
        return {
            "class_e_size": self.class_e_size,
            "class_o_size": self.class_o_size,
            "table": {f"{a},{m}": str(c) for (a, m), c in sorted(self.table.items())},
        }


def _compact_side_adjacency(g: Graph, b: Bipartition) -> list[int]:
    """Adjacency of classE vertices re-indexed over classO positions."""
    o_index = {v: i for i, v in enumerate(b.class_o)}
    rows = []
    for v in b.class_e:
        row = 0
        for w in bits_of(g.adj[v]):
            row |= 1 << o_index[w]
        rows.append(row)
    return rows


def _profile_chunk(adj_e: list[int], o_size: int, m: int,
                   prefix: int, low_bits: int) -> dict[tuple[int, int], int]:
    """Profile of all subsets whose top (m - low_bits) selection bits equal
    prefix.  Walks the low bits in Gray-code order, maintaining a coverage
    counter per classO vertex so each step costs O(degree)."""
    nbrs = [list(bits_of(row)) for row in adj_e]
    cover = [0] * o_size
    size = 0
    covered = 0
    for j in bits_of(prefix):
        size += 1
        for w in nbrs[low_bits + j]:
            if cover[w] == 0:
                covered += 1
            cover[w] += 1
    table: dict[tuple[int, int], int] = {}
    table[(size, covered)] = 1
    table_get = table.get
    for i in range(1, 1 << low_bits):
        flip = (i & -i).bit_length() - 1
        if (i ^ (i >> 1)) >> flip & 1:
            size += 1
            for w in nbrs[flip]:
                if cover[w] == 0:
                    covered += 1
                cover[w] += 1
        else:
            size -= 1
            for w in nbrs[flip]:
                cover[w] -= 1
                if cover[w] == 0:
                    covered -= 1
        key = (size, covered)
        table[key] = table_get(key, 0) + 1
    return table


def side_profile(g: Graph, b: Optional[Bipartition] = None,
                 workers: int = 1) -> SideProfile:
    """Exact (|A|, |N(A)|) profile over all 2**|classE| subsets of classE.

    The scan may be partitioned across processes by fixing high-order subset
    bits; partial tables are merged by addition in a fixed order, so the
    result does not depend on the worker count.
    """
    if b is None:
        b = bipartition(g)
    else:
        full = (1 << g.n) - 1
        e_mask, o_mask = b.e_mask, b.o_mask
        if e_mask | o_mask != full or e_mask & o_mask:
            raise GraphError("bipartition does not partition the vertex set")
        if any(g.adj[v] & e_mask for v in b.class_e) or \
                any(g.adj[v] & o_mask for v in b.class_o):
            raise GraphError("bipartition has an internal edge")
    m = len(b.class_e)
    if m > SIDE_BACKEND_CAP:
        raise GraphError(f"|classE| = {m} exceeds cap {SIDE_BACKEND_CAP}")
    adj_e = _compact_side_adjacency(g, b)
    o_size = len(b.class_o)
    if workers <= 1 or m < 8:
        table = _profile_chunk(adj_e, o_size, m, 0, m)
    else:
        prefix_bits = max(1, min(m - 4, (workers - 1).bit_length()))
        low = m - prefix_bits
        chunks = range(1 << prefix_bits)
        table = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_profile_chunk, adj_e, o_size, m, p, low)
                       for p in chunks]
            for fut in futures:  # fixed merge order
                for key, c in fut.result().items():
                    table[key] = table.get(key, 0) + c
    return SideProfile(table=table, class_e_size=m, class_o_size=o_size)


def sequence_from_profile(prof: SideProfile) -> IndSetSequence:
    """i_t = sum over profile cells of count * C(|O| - m, t - a)."""
    alpha_cap = prof.class_e_size + prof.class_o_size
    counts = []
    for t in range(alpha_cap + 1):
        total = 0
        for (a, mm), c in prof.table.items():
            if t - a >= 0:
                total += c * binom(prof.class_o_size - mm, t - a)
        counts.append(total)
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return IndSetSequence(tuple(counts))


def _add_shifted(base: list[int], shifted: list[int]) -> list[int]:
    # base + x * shifted, as size-indexed coefficient vectors
    out = list(base)
    need = len(shifted) + 1
    if len(out) < need:
        out.extend([0] * (need - len(out)))
    for i, c in enumerate(shifted):
        out[i + 1] += c
    return out


def _count_general_mask(adj: tuple[int, ...], mask: int) -> list[int]:
    if mask == 0:
        return [1]
    best_v = -1
    best_deg = -1
    for v in bits_of(mask):
        deg = popcount(adj[v] & mask)
        if deg > best_deg:
            best_deg = deg
            best_v = v
    if best_deg == 0:
        # isolated vertices remain: counts are binomials
        k = popcount(mask)
        return [binom(k, t) for t in range(k + 1)]
    v = best_v
    without = _count_general_mask(adj, mask & ~(1 << v))
    with_v = _count_general_mask(adj, mask & ~(adj[v] | (1 << v)))
    out = _add_shifted(without, with_v)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def count_general(g: Graph, cap: Optional[int] = None) -> IndSetSequence:
    cap = GENERAL_BACKEND_CAP if cap is None else cap
    if g.n > cap:
        raise GraphError(f"|V| = {g.n} exceeds general backend cap {cap}")
    return IndSetSequence(tuple(_count_general_mask(g.adj, (1 << g.n) - 1)))


def count_by_size(g: Graph, backend: str = "auto", workers: int = 1,
                  cap: Optional[int] = None) -> IndSetSequence:
    """Exact independent-set sequence of g.

    backend "auto" prefers the bipartite side-profile method when the graph
    is bipartite and within cap, falling back to general branching.
    Forcing backend "bipartite" on a non-bipartite graph is a hard error.
    """
    if backend not in ("auto", "general", "bipartite"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend in ("auto", "bipartite"):
        try:
            b = bipartition(g)
        except NotBipartiteError:
            if backend == "bipartite":
                raise
            b = None
        if b is not None and len(b.class_e) <= SIDE_BACKEND_CAP:
            return sequence_from_profile(side_profile(g, b, workers=workers))
        if backend == "bipartite":
            raise GraphError("bipartite backend cap exceeded")
    return count_general(g, cap=cap)


def independence_number(g: Graph, backend: str = "auto") -> int:
    return count_by_size(g, backend=backend).alpha
