"""Shared fixtures for the test suite: seeded instance generators and small oracles."""

import itertools
from fractions import Fraction

import networkx as nx

from sharealloc import Instance

ALPHA_BETA = [(1, 1), (Fraction(1, 2), 1), (1, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2))]


def random_instance(rng, n=None, m=None, *, ext=False, identical=False, sharing=None, attention=None, u_max=4):
    """Random instance; ``sharing``/``attention`` may be explicit lists or shorthand strings."""
    n = n if n is not None else rng.randint(1, 5)
    m = m if m is not None else rng.randint(0, 5)
    row = [rng.randint(0, u_max) for _ in range(m)]
    utilities = [row[:] if identical else [rng.randint(0, u_max) for _ in range(m)] for _ in range(n)]
    allocation = [[] for _ in range(n)]
    for r in range(m):
        allocation[rng.randrange(n)].append(r)
    pairs = list(itertools.combinations(range(n), 2))
    edges = sharing if sharing is not None else [p for p in pairs if rng.random() < 0.6]
    arcs = attention if attention is not None else [
        (i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.5
    ]
    kw = {}
    if ext:
        kw["alpha"] = rng.choice([Fraction(1), Fraction(1, 2), Fraction(2, 3)])
        kw["beta"] = rng.choice([Fraction(1), Fraction(1, 2), Fraction(0)])
        if isinstance(edges, list):
            kw["edge_costs"] = {e: rng.randint(0, 3) for e in edges}
        kw["budget"] = rng.choice([None, 0, 1, 3])
    return Instance.build(utilities, allocation, edges, arcs, **kw)


def welfare_instance(rng, alpha_beta=(1, 1), costs=False):
    """Instance for the welfare problems: n, m <= 6, utilities <= 10, no attention."""
    n, m = rng.randint(1, 6), rng.randint(0, 6)
    utilities = [[rng.randint(0, 10) for _ in range(m)] for _ in range(n)]
    allocation = [[] for _ in range(n)]
    for r in range(m):
        allocation[rng.randrange(n)].append(r)
    p = rng.choice([0.3, 0.6, 1.0])
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    edge_costs = {e: rng.randint(0, 5) for e in edges} if costs else None
    return Instance.build(utilities, allocation, edges, [], alpha=alpha_beta[0], beta=alpha_beta[1], edge_costs=edge_costs)


def tree_like_instance(rng, n, m, kind, *, ext=False):
    """Sharing graph is a path or a random tree; attention runs along sharing edges only."""
    if kind == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    else:
        edges = [(rng.randrange(i), i) for i in range(1, n)]
    arcs = []
    for i, j in edges:
        c = rng.randrange(3)
        if c != 1:
            arcs.append((i, j))
        if c != 0:
            arcs.append((j, i))
    return random_instance(rng, n, m, ext=ext, sharing=edges, attention=arcs)


def all_matchings(edges):
    """Every matching of a weighted edge list, as lists of ``(u, v, w)``."""
    out = []

    def rec(i, used, cur):
        if i == len(edges):
            out.append(list(cur))
            return
        rec(i + 1, used, cur)
        u, v, _ = edges[i]
        if u not in used and v not in used:
            cur.append(edges[i])
            rec(i + 1, used | {u, v}, cur)
            cur.pop()

    rec(0, frozenset(), [])
    return out


def random_graph(rng, n, p):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(e for e in itertools.combinations(range(n), 2) if rng.random() < p)
    return g


def random_colored_graph(rng, ell, size, p):
    g = nx.Graph()
    coloring = {}
    for c in range(ell):
        for x in range(size):
            g.add_node((c, x))
            coloring[(c, x)] = c
    for a, b in itertools.combinations(list(g.nodes), 2):
        if coloring[a] != coloring[b] and rng.random() < p:
            g.add_edge(a, b)
    return g, coloring


def random_cnf(rng, num_variables, num_clauses):
    return [
        tuple(rng.choice([-1, 1]) * rng.randint(1, num_variables) for _ in range(rng.randint(1, 3)))
        for _ in range(num_clauses)
    ]


def random_n3dm(rng):
    """Random N3DM source with m <= 2 and T <= 6 that meets the sum precondition."""
    while True:
        m, T = rng.randint(1, 2), rng.randint(3, 6)
        items = [rng.randint(1, T - 1) for _ in range(3 * m)]
        if sum(items) == m * T:
            return items[:m], items[m : 2 * m], items[2 * m :], T
