"""Exact matching primitives.

networkx supplies the two engines (Edmonds' blossom algorithm for maximum
weight matching, which stays in integer arithmetic for integer weights, and
Hopcroft-Karp for bipartite cardinality). The two bounded variants are built on
top of a single maximum weight matching call each.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx
from networkx.algorithms import bipartite

__all__ = [
    "WeightedGraph",
    "Matching",
    "max_weight_matching",
    "max_cardinality_bipartite_matching",
    "solve_sbmwm",
    "solve_wbmm",
]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on ``0..vertex_count-1`` with non-negative integer edge weights."""

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        norm = []
        seen = set()
        for u, v, w in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u},{v}) has an invalid endpoint")
            if not isinstance(w, int) or w < 0:
                raise ValueError(f"edge ({u},{v}) needs a non-negative integer weight")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append((key[0], key[1], w))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def weight_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges}


@dataclass(frozen=True)
class Matching:
    edges: frozenset[tuple[int, int]]
    total_weight: int

    @property
    def cardinality(self) -> int:
        return len(self.edges)

    @classmethod
    def of(cls, edges: Iterable[tuple[int, int]], weights: dict[tuple[int, int], int] | None = None) -> "Matching":
        es = frozenset((min(u, v), max(u, v)) for u, v in edges)
        covered = [x for e in es for x in e]
        if len(covered) != len(set(covered)):
            raise ValueError("matching edges share an endpoint")
        total = sum(weights[e] for e in es) if weights is not None else len(es)
        return cls(es, total)


EMPTY = Matching(frozenset(), 0)


def _nx_graph(vertex_count: int, edges: Iterable[tuple[int, int, int]]) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(vertex_count))
    for u, v, w in edges:
        g.add_edge(u, v, weight=w)
    return g


def max_weight_matching(g: WeightedGraph) -> Matching:
    """A maximum weight matching (not necessarily of maximum cardinality)."""
    if not g.edges:
        return EMPTY
    mate = nx.max_weight_matching(_nx_graph(g.vertex_count, g.edges), maxcardinality=False)
    return Matching.of(mate, g.weight_map())


def max_cardinality_bipartite_matching(
    left_size: int, right_size: int, edges: Iterable[tuple[int, int]]
) -> Matching:
    """Maximum matching between ``0..left_size-1`` and ``0..right_size-1``.

    Edges are ``(left, right)`` pairs and the returned matching uses the same
    convention; total_weight counts each edge as 1.
    """
    edges = sorted(set(edges))
    g = nx.Graph()
    g.add_nodes_from(range(left_size))
    g.add_nodes_from(range(left_size, left_size + right_size))
    for a, b in edges:
        if not (0 <= a < left_size and 0 <= b < right_size):
            raise ValueError(f"edge ({a},{b}) does not cross the bipartition")
        g.add_edge(a, left_size + b)
    mate = bipartite.hopcroft_karp_matching(g, top_nodes=range(left_size))
    pairs = [(a, mate[a] - left_size) for a in range(left_size) if a in mate]
    return Matching(frozenset(pairs), len(pairs))


def _padded_matching(g: WeightedGraph, size: int, bonus: int) -> Matching:
    """Best matching among those with at most ``size`` edges of ``g``.

    ``n - 2*size`` new vertices are joined to every old vertex with a weight larger
    than any old matching can reach, so each new vertex is matched and at most
    ``2*size`` old vertices remain free for old edges. ``bonus`` is added to every
    old edge, which with a large bonus makes the number of old edges the first
    criterion and the weight the second.
    """
    n = g.vertex_count
    size = min(size, n // 2)
    old = [(u, v, w + bonus) for u, v, w in g.edges]
    pad = sum(w for _, _, w in old) + 1
    extra = n - 2 * size
    new_edges = list(old)
    for x in range(n, n + extra):
        new_edges.extend((v, x, pad) for v in range(n))
    if not new_edges:
        return EMPTY
    mate = nx.max_weight_matching(_nx_graph(n + extra, new_edges), maxcardinality=False)
    weights = g.weight_map()
    kept = [(min(a, b), max(a, b)) for a, b in mate if a < n and b < n]
    return Matching.of(kept, weights)


def solve_sbmwm(g: WeightedGraph, k1: int, k2: int) -> tuple[bool, Matching | None]:
    """Is there a matching with at most ``k1`` edges and weight at least ``k2``?"""
    if k1 < 0 or k2 < 0:
        raise ValueError("k1 and k2 must be non-negative")
    best = _padded_matching(g, k1, 0)
    return (True, best) if best.total_weight >= k2 else (False, None)


def solve_wbmm(g: WeightedGraph, k1: int, k2: int) -> tuple[bool, Matching | None]:
    """Is there a matching with weight at most ``k1`` and at least ``k2`` edges?

    Weights are flipped to ``W - w`` with ``W`` the largest weight, so a light
    matching of ``k2`` edges becomes a heavy one. The search is restricted to
    matchings with exactly ``k2`` edges, whose flipped weight is ``W*k2 - w``.
    """
    if k1 < 0 or k2 < 0:
        raise ValueError("k1 and k2 must be non-negative")
    n = g.vertex_count
    if k2 == 0:
        return True, EMPTY
    if k2 > n // 2:
        return False, None
    top = max((w for _, _, w in g.edges), default=0)
    flipped = WeightedGraph(n, tuple((u, v, top - w) for u, v, w in g.edges))
    # any bonus above the largest possible flipped total ranks cardinality first
    bonus = top * (n // 2) + 1
    best = _padded_matching(flipped, k2, bonus)
    if best.cardinality < k2:
        return False, None
    weights = g.weight_map()
    found = Matching.of(best.edges, weights)
    if top * k2 - best.total_weight > k1:  # flipped total below W*k2 - k1
        return False, None
    return True, found
