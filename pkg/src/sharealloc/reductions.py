"""Instance generators from the hardness constructions, with matching witnesses.

Every generator fixes an index layout so witnesses and tests can address agents
and resources by role. The ``*_witness`` functions build the sharing that the
forward direction of each construction describes, and ``*_bruteforce`` solve
the source problems directly for cross-checks.

Graphs are networkx graphs; vertices are indexed in ``graph.nodes`` order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb
from typing import Sequence

import networkx as nx

from .model import Instance, Sharing, edge_key

__all__ = [
    "gen_independent_set_ersa",
    "independent_set_witness",
    "max_independent_set_size",
    "gen_3sat_ersa",
    "SatLayout",
    "sat_witness",
    "sat_bruteforce",
    "gen_multicolored_clique_ersa",
    "McLayout",
    "multicolored_clique_witness",
    "multicolored_clique_bruteforce",
    "gen_clique_ersa",
    "clique_witness",
    "has_clique",
    "gen_n3dm_ewsa",
    "n3dm_witness",
    "n3dm_bruteforce",
]


def _vertices(graph: nx.Graph) -> tuple[list, dict]:
    nodes = list(graph.nodes)
    return nodes, {v: i for i, v in enumerate(nodes)}


# --- independent set --------------------------------------------------------
#
# agents: a_0..a_{n-1} (vertex agents), p_1..p_{l-1} (providers), s (special)
# resources: r^a_i = 2i, r^a'_i = 2i+1, r^p_j = 2n + j - 1, r^s = 2n + l - 1


def gen_independent_set_ersa(graph: nx.Graph, ell: int) -> tuple[Instance, int]:
    """ERSA instance that beats ``n`` envious agents iff ``graph`` has an
    independent set of size ``ell``. Sharing and attention are cliques, k = n - 1."""
    nodes, idx = _vertices(graph)
    n = len(nodes)
    if ell < 1:
        raise ValueError("ell must be at least 1")
    if ell > n:
        raise ValueError("ell cannot exceed the number of vertices")
    agents = n + ell
    m = 2 * n + ell
    prov = [2 * n + j for j in range(ell - 1)]
    special = 2 * n + ell - 1
    adjacent = {edge_key(idx[x], idx[y]) for x, y in graph.edges if x != y}
    util = []
    for i in range(n):
        row = [0] * m
        for j in range(n):
            row[2 * j] = int(edge_key(i, j) in adjacent) if i != j else 0
        for r in prov + [special]:
            row[r] = 3
        util.append(row)
    for _ in prov:
        util.append([1] * (2 * n) + [3] * ell)
    util.append([0] * (m - 1) + [3])
    alloc = [[2 * i, 2 * i + 1] for i in range(n)] + [[r] for r in prov] + [[special]]
    inst = Instance.build(util, alloc, "clique", "clique")
    assert inst.n == agents
    return inst, n - 1


def independent_set_witness(graph: nx.Graph, ell: int, independent: Sequence) -> Sharing:
    """Each chosen vertex agent receives one provider's resource."""
    nodes, idx = _vertices(graph)
    n = len(nodes)
    chosen = sorted(idx[v] for v in independent)[:ell]
    if len(chosen) < ell:
        raise ValueError("need at least ell vertices")
    providers = list(range(n, n + ell))
    return Sharing.from_transfers(
        (p, a, 2 * n + (p - n)) for p, a in zip(providers, chosen)
    )


def max_independent_set_size(graph: nx.Graph) -> int:
    nodes = list(graph.nodes)
    for size in range(len(nodes), 0, -1):
        for sub in combinations(nodes, size):
            if not any(graph.has_edge(x, y) for x, y in combinations(sub, 2)):
                return size
    return 0


# --- 3-SAT ------------------------------------------------------------------
#
# Literals are non-zero ints (DIMACS style). Agents: leader 0, follower 1, then
# per variable x: value agent a(x), value agent a(not x), dummy d1, dummy d2;
# then per clause: root, and per literal a (donor, recipient) pair.
# Unanimous utility: leader's resource 2; d1's resource 3; d2's resources 1 and
# 2; a donor's resource 1; a recipient's two resources 1 each; a root's 2.


@dataclass
class SatLayout:
    variables: list[int]
    leader: int = 0
    follower: int = 1
    value_agent: dict[int, int] = field(default_factory=dict)  # literal -> agent
    dummies: dict[int, tuple[int, int]] = field(default_factory=dict)
    roots: list[int] = field(default_factory=list)
    pairs: list[list[tuple[int, int]]] = field(default_factory=list)  # per clause: (donor, recipient)
    owned: dict[int, list[int]] = field(default_factory=dict)


def _sat_layout(clauses: Sequence[Sequence[int]], num_variables: int | None):
    for c in clauses:
        if not c or len(c) > 3 or any(l == 0 for l in c):
            raise ValueError(f"clause {tuple(c)} must have 1 to 3 non-zero literals")
    top = max((abs(l) for c in clauses for l in c), default=0)
    if num_variables is None:
        num_variables = top
    if num_variables < top:
        raise ValueError("num_variables is smaller than a used variable")
    lay = SatLayout(variables=list(range(1, num_variables + 1)))
    values: list[int] = []

    def agent(vals: Sequence[int]) -> int:
        a = len(lay.owned)
        lay.owned[a] = list(range(len(values), len(values) + len(vals)))
        values.extend(vals)
        return a

    agent([2])
    agent([])
    for x in lay.variables:
        lay.value_agent[x] = agent([])
        lay.value_agent[-x] = agent([])
        lay.dummies[x] = (agent([3]), agent([1, 2]))
    for c in clauses:
        lay.roots.append(agent([2]))
        lay.pairs.append([(agent([1]), agent([1, 1])) for _ in c])
    return lay, values


def gen_3sat_ersa(
    clauses: Sequence[Sequence[int]], num_variables: int | None = None
) -> tuple[Instance, int]:
    """ERSA instance with zero envy reachable iff the CNF formula is satisfiable.

    Initially only the follower is envious. The sharing graph is the attention
    graph read as undirected; k = 0.
    """
    lay, values = _sat_layout(clauses, num_variables)
    n = len(lay.owned)
    arcs = [(lay.follower, lay.leader)]
    for x in lay.variables:
        for d in lay.dummies[x]:
            arcs += [(d, lay.value_agent[x]), (d, lay.value_agent[-x])]
        arcs += [(lay.value_agent[x], lay.follower), (lay.value_agent[-x], lay.follower)]
    for c, root, pairs in zip(clauses, lay.roots, lay.pairs):
        for lit, (donor, rec) in zip(c, pairs):
            arcs += [(root, rec), (rec, donor), (rec, lay.value_agent[lit])]
    arcs = sorted(set(arcs))
    edges = sorted({edge_key(i, j) for i, j in arcs})
    alloc = [lay.owned[a] for a in range(n)]
    inst = Instance.build([list(values)] * n, alloc, edges, arcs)
    return inst, 0


def sat_witness(
    clauses: Sequence[Sequence[int]], assignment: dict[int, bool], num_variables: int | None = None
) -> Sharing:
    """Sharing with no envious agent built from a satisfying assignment."""
    lay, _ = _sat_layout(clauses, num_variables)
    t = [(lay.leader, lay.follower, lay.owned[lay.leader][0])]
    for x in lay.variables:
        d1, d2 = lay.dummies[x]
        three, two = lay.owned[d1][0], lay.owned[d2][1]
        pos, neg = lay.value_agent[x], lay.value_agent[-x]
        if assignment.get(x, False):
            t += [(d2, pos, two), (d1, neg, three)]
        else:
            t += [(d1, pos, three), (d2, neg, two)]
    for c, root, pairs in zip(clauses, lay.roots, lay.pairs):
        truth = [assignment.get(abs(l), False) == (l > 0) for l in c]
        if not any(truth):
            raise ValueError(f"assignment does not satisfy clause {tuple(c)}")
        giver = truth.index(True)
        for pos_, (donor, rec) in enumerate(pairs):
            if pos_ == giver:
                t.append((rec, root, lay.owned[rec][0]))
            else:
                t.append((donor, rec, lay.owned[donor][0]))
    return Sharing.from_transfers(t)


def sat_bruteforce(clauses: Sequence[Sequence[int]], num_variables: int | None = None):
    """A satisfying assignment as ``{var: bool}``, or ``None``."""
    top = max((abs(l) for c in clauses for l in c), default=0)
    nv = max(top, num_variables or 0)
    for bits in product((False, True), repeat=nv):
        a = {x + 1: bits[x] for x in range(nv)}
        if all(any(a[abs(l)] == (l > 0) for l in c) for c in clauses):
            return a
    return None


# --- multicolored clique ----------------------------------------------------
#
# Agents: per color i: selector s_i, provider p_i, dummy d_i (3i, 3i+1, 3i+2);
# then per forbidden edge e = {v, v'} (colors i < j): c_e^i, c_e^j.
# Resources: per color i: r(s_i,1), r(s_i,2), r(d_i,1), r(d_i,2), then one per
# vertex of color i; then per forbidden edge r(c_e^i), r(c_e^j).


@dataclass
class McLayout:
    ell: int
    classes: list[list]  # vertices per color
    selector: list[int]
    provider: list[int]
    dummy: list[int]
    vertex_resource: dict
    forbidden: list[tuple]  # (v, v') with color(v) < color(v')
    certifiers: list[tuple[int, int]]  # (c_e^i, c_e^j)
    owned: list[list[int]]


def _mc_layout(graph: nx.Graph, coloring: dict, ell: int) -> McLayout:
    if ell < 1:
        raise ValueError("ell must be at least 1")
    classes: list[list] = [[] for _ in range(ell)]
    for v in graph.nodes:
        c = coloring.get(v)
        if c is None or not 0 <= c < ell:
            raise ValueError(f"vertex {v!r} has no color in 0..{ell - 1}")
        classes[c].append(v)
    size = len(classes[0])
    if any(len(cl) != size for cl in classes):
        raise ValueError("unbalanced coloring: every color class needs the same size")
    for x, y in graph.edges:
        if coloring[x] == coloring[y]:
            raise ValueError(f"edge {{{x!r},{y!r}}} joins two vertices of the same color")
    owned: list[list[int]] = []
    nres = 0

    def grab(count: int) -> list[int]:
        nonlocal nres
        out = list(range(nres, nres + count))
        nres += count
        return out

    sel, prov, dum = [], [], []
    vres = {}
    for i in range(ell):
        s_res, d_res, v_res = grab(2), grab(2), grab(size)
        sel.append(len(owned))
        owned.append(s_res)
        prov.append(len(owned))
        owned.append(v_res)
        dum.append(len(owned))
        owned.append(d_res)
        vres.update(zip(classes[i], v_res))
    forbidden = []
    certs = []
    for i, j in combinations(range(ell), 2):
        for v in classes[i]:
            for w in classes[j]:
                if not graph.has_edge(v, w):
                    forbidden.append((v, w))
                    a = len(owned)
                    owned.append(grab(1))
                    owned.append(grab(1))
                    certs.append((a, a + 1))
    return McLayout(ell, classes, sel, prov, dum, vres, forbidden, certs, owned)


def gen_multicolored_clique_ersa(graph: nx.Graph, coloring: dict, ell: int) -> tuple[Instance, int]:
    """ERSA instance with at most k envious agents iff ``graph`` has a clique with
    one vertex of each of the ``ell`` colors. k is the number of forbidden edges
    (cross-color vertex pairs that are not edges)."""
    lay = _mc_layout(graph, coloring, ell)
    n = len(lay.owned)
    m = sum(len(o) for o in lay.owned)
    color_of = {v: c for c, cl in enumerate(lay.classes) for v in cl}
    util = [[0] * m for _ in range(n)]
    arcs = []
    for i in range(ell):
        s = lay.selector[i]
        for r in lay.owned[lay.dummy[i]]:
            util[s][r] = 1
        for r in lay.owned[lay.provider[i]]:
            util[s][r] = 2
        arcs += [(lay.provider[i], s), (s, lay.dummy[i])]
    for (v, w), (ci, cj) in zip(lay.forbidden, lay.certifiers):
        for me, partner, endpoint in ((ci, cj, v), (cj, ci, w)):
            col = color_of[endpoint]
            for r in lay.owned[lay.selector[col]]:
                util[me][r] = 1
            for r in lay.owned[lay.provider[col]]:
                util[me][r] = 1
            util[me][lay.vertex_resource[endpoint]] = 2
            util[me][lay.owned[partner][0]] = 3
        arcs += [(cj, ci), (ci, lay.selector[color_of[v]]), (cj, lay.selector[color_of[w]])]
    edges = sorted({edge_key(i, j) for i, j in arcs})
    inst = Instance.build(util, lay.owned, edges, arcs)
    return inst, len(lay.forbidden)


def multicolored_clique_witness(graph: nx.Graph, coloring: dict, ell: int, clique: Sequence) -> Sharing:
    """Providers hand the clique's vertex resources to the selectors; on every
    forbidden edge the certifier whose endpoint is unused receives from its partner."""
    lay = _mc_layout(graph, coloring, ell)
    picked = {coloring[v]: v for v in clique}
    if sorted(picked) != list(range(ell)):
        raise ValueError("the clique must have one vertex of every color")
    t = []
    for i in range(ell):
        t.append((lay.provider[i], lay.selector[i], lay.vertex_resource[picked[i]]))
    for (v, w), (ci, cj) in zip(lay.forbidden, lay.certifiers):
        if picked[coloring[v]] != v:
            t.append((cj, ci, lay.owned[cj][0]))
        elif picked[coloring[w]] != w:
            t.append((ci, cj, lay.owned[ci][0]))
        else:
            raise ValueError("the chosen vertices are not a clique")
    return Sharing.from_transfers(t)


def multicolored_clique_bruteforce(graph: nx.Graph, coloring: dict, ell: int):
    """A multicolored clique as a list of vertices, or ``None``."""
    lay = _mc_layout(graph, coloring, ell)
    for pick in product(*lay.classes):
        if all(graph.has_edge(x, y) for x, y in combinations(pick, 2)):
            return list(pick)
    return None


# --- clique with bundles of size one ---------------------------------------
#
# Agents: vertex agents, edge agents (graph.edges order), 2m dummies, then
# C(l, 2) happy agents; happy agent h_t owns resource t. Unit utilities.


def _clique_check(graph: nx.Graph, ell: int) -> None:
    n, m = graph.number_of_nodes(), graph.number_of_edges()
    if not 4 <= ell < n:
        raise ValueError("need 4 <= ell < number of vertices")
    if comb(ell, 2) > m:
        raise ValueError("need C(ell, 2) <= number of edges")


def gen_clique_ersa(graph: nx.Graph, ell: int) -> tuple[Instance, int]:
    """ERSA instance with every initial bundle of size at most one; at most
    k = m - C(ell,2) + ell envious agents are reachable iff ``graph`` has an
    ``ell``-clique."""
    _clique_check(graph, ell)
    nodes, idx = _vertices(graph)
    n = len(nodes)
    elist = list(graph.edges)
    m = len(elist)
    happy = comb(ell, 2)
    first_edge, first_dummy, first_happy = n, n + m, n + 3 * m
    agents = first_happy + happy
    util = [[1] * happy for _ in range(agents)]
    alloc = [[] for _ in range(first_happy)] + [[t] for t in range(happy)]
    arcs = []
    for e, (x, y) in enumerate(elist):
        arcs += [(first_edge + e, first_happy + t) for t in range(happy)]
        arcs += [(idx[x], first_edge + e), (idx[y], first_edge + e)]
    for d in range(2 * m):
        arcs += [(first_dummy + d, v) for v in range(n)]
    inst = Instance.build(util, alloc, "clique", arcs)
    return inst, m - happy + ell


def clique_witness(graph: nx.Graph, ell: int, clique: Sequence) -> Sharing:
    """Happy agents share with the edge agents of the clique's edges."""
    _clique_check(graph, ell)
    n = graph.number_of_nodes()
    elist = list(graph.edges)
    members = set(clique)
    inside = [e for e, (x, y) in enumerate(elist) if x in members and y in members]
    if len(members) != ell or len(inside) != comb(ell, 2):
        raise ValueError("not an ell-clique")
    first_happy = n + 3 * len(elist)
    return Sharing.from_transfers((first_happy + t, n + e, t) for t, e in enumerate(inside))


def has_clique(graph: nx.Graph, ell: int):
    """An ``ell``-clique as a list of vertices, or ``None``."""
    for sub in combinations(list(graph.nodes), ell):
        if all(graph.has_edge(x, y) for x, y in combinations(sub, 2)):
            return list(sub)
    return None


# --- numerical 3-dimensional matching ---------------------------------------
#
# Agents 0..m-1 hold the large resources (X), m..2m-1 the middle ones (Y),
# 2m..3m-1 the small ones (Z); agent i owns resource i.


def _n3dm_check(X, Y, Z, T) -> int:
    m = len(X)
    if not (len(Y) == m and len(Z) == m):
        raise ValueError("X, Y and Z must have the same size")
    items = list(X) + list(Y) + list(Z)
    if any(not isinstance(x, int) or x < 1 for x in items):
        raise ValueError("elements must be positive integers")
    if any(x >= T for x in items):
        raise ValueError("every element must be smaller than T")
    if sum(items) != m * T:
        raise ValueError("elements must sum to m * T")
    return m


def gen_n3dm_ewsa(X, Y, Z, T: int) -> tuple[Instance, int, int]:
    """2-bounded EWSA instance reaching egalitarian welfare k = (B^2 + B + 1) T
    (B = m T) iff X, Y, Z split into m triples summing to T."""
    m = _n3dm_check(X, Y, Z, T)
    B = m * T
    k = (B * B + B + 1) * T
    util = []
    for a in range(3 * m):
        row = [B * B * T + x for x in X] + [B * T + y for y in Y] + [0] * m
        if a < 2 * m:
            row[a] = k
        else:
            row[a] = Z[a - 2 * m]
        util.append(row)
    alloc = [[a] for a in range(3 * m)]
    return Instance.build(util, alloc, "clique", ()), 2, k


def n3dm_witness(X, Y, Z, T: int, triples: Sequence[tuple[int, int, int]]) -> Sharing:
    """``triples`` are index triples (i, j, l) into X, Y, Z; the large and middle
    holders both share with the small holder."""
    m = _n3dm_check(X, Y, Z, T)
    t = []
    for i, j, l in triples:
        t += [(i, 2 * m + l, i), (m + j, 2 * m + l, m + j)]
    return Sharing.from_transfers(t, bound=2)


def n3dm_bruteforce(X, Y, Z, T: int):
    """Index triples forming a valid matching, or ``None``."""
    m = _n3dm_check(X, Y, Z, T)
    for py in permutations(range(m)):
        for pz in permutations(range(m)):
            if all(X[i] + Y[py[i]] + Z[pz[i]] == T for i in range(m)):
                return [(i, py[i], pz[i]) for i in range(m)]
    return None
