"""Envy minimization by dynamic programming over a nice tree decomposition.

Applies when the attention graph, read as undirected, is the sharing graph.
Every agent in a bag carries a sharing state (idle, receives resource ``r``, or
donates resource ``r``), a flag telling whether its share has already been
matched with a partner, and a flag telling whether it is already known to be
envious. Receiving ``r`` fixes the donor (the owner of ``r``), so a partner
identity is not stored.

Shares are committed at exactly one node per sharing edge: the topmost node
whose bag holds both endpoints. Envy between two agents is evaluated when the
second of them is introduced. A forgotten agent must be idle or matched, and its
envy flag is added to the running count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .._limits import NodeCounter, SearchBudgetExceeded, node_cap as _node_cap
from .._values import ScaledValues
from ..model import Instance, Sharing, edge_key, envious_agents

__all__ = [
    "TreeNode",
    "NiceTreeDecomposition",
    "InvalidDecompositionError",
    "min_fill_order",
    "exact_elimination_order",
    "build_nice_decomposition",
    "solve_ersa_treewidth",
]

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


class InvalidDecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeNode:
    kind: str
    bag: frozenset[int]
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes indexed by position; ``root`` is ``None`` only for the empty tree."""

    nodes: tuple[TreeNode, ...]
    root: int | None

    @property
    def width(self) -> int:
        return max((len(t.bag) for t in self.nodes), default=0) - 1

    def validate(self, n: int, edges: Iterable[tuple[int, int]]) -> None:
        """Raise :class:`InvalidDecompositionError` unless this is a nice tree
        decomposition of the graph on ``range(n)`` with ``edges``."""
        edges = [edge_key(i, j) for i, j in edges]
        if self.root is None:
            if self.nodes:
                raise InvalidDecompositionError("nodes given without a root")
            if edges:
                raise InvalidDecompositionError("empty decomposition cannot cover any edge")
            return
        if not 0 <= self.root < len(self.nodes):
            raise InvalidDecompositionError(f"root {self.root} is not a node")
        parent: dict[int, int] = {}
        stack = [self.root]
        seen = {self.root}
        while stack:
            t = stack.pop()
            for c in self.nodes[t].children:
                if not 0 <= c < len(self.nodes) or c in seen:
                    raise InvalidDecompositionError(f"node {t} has a bad or repeated child {c}")
                seen.add(c)
                parent[c] = t
                stack.append(c)
        if len(seen) != len(self.nodes):
            raise InvalidDecompositionError("some nodes are not reachable from the root")
        for idx, t in enumerate(self.nodes):
            if any(not 0 <= v < n for v in t.bag):
                raise InvalidDecompositionError(f"node {idx} has an unknown vertex")
            kids = [self.nodes[c].bag for c in t.children]
            ok = {
                LEAF: not kids and not t.bag,
                INTRODUCE: len(kids) == 1 and t.vertex not in kids[0] and t.bag == kids[0] | {t.vertex},
                FORGET: len(kids) == 1 and t.vertex in kids[0] and t.bag == kids[0] - {t.vertex},
                JOIN: len(kids) == 2 and kids[0] == t.bag and kids[1] == t.bag,
            }.get(t.kind)
            if not ok:
                raise InvalidDecompositionError(f"node {idx} is not a valid {t.kind} node")
        for i, j in edges:
            if not any(i in t.bag and j in t.bag for t in self.nodes):
                raise InvalidDecompositionError(f"edge ({i},{j}) is not covered by any bag")
        for v in range(n):
            tops = [
                idx
                for idx, t in enumerate(self.nodes)
                if v in t.bag and (idx == self.root or v not in self.nodes[parent[idx]].bag)
            ]
            if len(tops) > 1:
                raise InvalidDecompositionError(f"bags containing vertex {v} are not connected")

    @classmethod
    def from_tree(
        cls, bags: Sequence[Iterable[int]], tree_edges: Iterable[tuple[int, int]], root: int = 0
    ) -> "NiceTreeDecomposition":
        """Nice decomposition from any tree decomposition given as bags plus tree edges."""
        bags = [frozenset(b) for b in bags]
        if not bags:
            return cls((), None)
        adj: list[list[int]] = [[] for _ in bags]
        for a, b in tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        children: list[list[int]] = [[] for _ in bags]
        order = [root]
        seen = {root}
        for t in order:
            for c in sorted(adj[t]):
                if c not in seen:
                    seen.add(c)
                    children[t].append(c)
                    order.append(c)
        if len(seen) != len(bags):
            raise InvalidDecompositionError("tree edges do not connect all bags")
        return _niceify(bags, children, root)


def _niceify(bags: list[frozenset[int]], children: list[list[int]], root: int) -> NiceTreeDecomposition:
    nodes: list[TreeNode] = []

    def add(kind, bag, vertex=None, kids=()) -> int:
        nodes.append(TreeNode(kind, frozenset(bag), vertex, tuple(kids)))
        return len(nodes) - 1

    def chain(idx: int, src: frozenset[int], dst: frozenset[int]) -> int:
        bag = set(src)
        for v in sorted(src - dst):
            bag.discard(v)
            idx = add(FORGET, bag, v, (idx,))
        for v in sorted(dst - src):
            bag.add(v)
            idx = add(INTRODUCE, bag, v, (idx,))
        return idx

    # post-order without recursion
    done: dict[int, int] = {}
    stack = [(root, False)]
    while stack:
        t, expanded = stack.pop()
        if not expanded:
            stack.append((t, True))
            stack.extend((c, False) for c in reversed(children[t]))
            continue
        kids = [chain(done[c], bags[c], bags[t]) for c in children[t]]
        if not kids:
            cur = chain(add(LEAF, ()), frozenset(), bags[t])
        else:
            cur = kids[0]
            for other in kids[1:]:
                cur = add(JOIN, bags[t], None, (cur, other))
        done[t] = cur
    top = chain(done[root], bags[root], frozenset())
    return NiceTreeDecomposition(tuple(nodes), top)


def _adjacency(n: int, edges) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def _order_width(n: int, edges, order: Sequence[int]) -> int:
    adj = _adjacency(n, edges)
    width = -1
    for v in order:
        nb = adj[v]
        width = max(width, len(nb))
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
        adj[v] = set()
    return width


def min_fill_order(n: int, edges) -> list[int]:
    """Greedy elimination order: always remove the vertex needing the fewest fill edges
    (ties: smaller degree, then smaller index)."""
    adj = _adjacency(n, edges)
    left = set(range(n))
    order = []
    while left:
        def fill(v):
            nb = sorted(adj[v])
            return sum(1 for x in range(len(nb)) for y in nb[x + 1 :] if y not in adj[nb[x]])

        v = min(left, key=lambda v: (fill(v), len(adj[v]), v))
        nb = adj[v]
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
        adj[v] = set()
        left.discard(v)
        order.append(v)
    return order


def exact_elimination_order(
    n: int, edges, max_width: int = 4, *, node_cap: int | None = None
) -> list[int] | None:
    """Elimination order of minimum width if that width is at most ``max_width``.

    Branch and bound over elimination orders; sets of already eliminated vertices
    are memoized, and the minimum degree of the remaining graph is the lower
    bound. Returns ``None`` when the treewidth exceeds ``max_width``.
    """
    counter = NodeCounter(_node_cap(node_cap), "exact tree decomposition")
    best: list = [max_width + 1, None]
    seen: dict[frozenset[int], int] = {}

    def rec(adj: dict[int, set[int]], order: list[int], width: int) -> None:
        counter.tick()
        if not adj:
            if width < best[0]:
                best[0], best[1] = width, list(order)
            return
        low = max(width, min(len(nb) for nb in adj.values()))
        if low >= best[0]:
            return
        key = frozenset(order)
        if seen.get(key, best[0] + 1) <= width:
            return
        seen[key] = width
        for v in sorted(adj, key=lambda v: (len(adj[v]), v)):
            nb = adj[v]
            w = max(width, len(nb))
            if w >= best[0]:
                continue
            nxt = {a: (s - {v}) | (nb - {a}) if a in nb else s for a, s in adj.items() if a != v}
            order.append(v)
            rec(nxt, order, w)
            order.pop()

    rec({v: s for v, s in enumerate(_adjacency(n, edges))}, [], -1)
    return best[1]


def _from_order(n: int, edges, order: Sequence[int]) -> NiceTreeDecomposition:
    if n == 0:
        return NiceTreeDecomposition((), None)
    pos = {v: p for p, v in enumerate(order)}
    adj = _adjacency(n, edges)
    bags: list[frozenset[int]] = []
    parent: list[int | None] = []
    for v in order:
        nb = set(adj[v])
        bags.append(frozenset(nb | {v}))
        parent.append(pos[min(nb, key=pos.__getitem__)] if nb else None)
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
        adj[v] = set()
    # one extra empty bag ties the components together
    bags.append(frozenset())
    children: list[list[int]] = [[] for _ in bags]
    for t, p in enumerate(parent):
        children[len(bags) - 1 if p is None else p].append(t)
    return _niceify(bags, children, len(bags) - 1)


def build_nice_decomposition(
    n: int, edges, *, exact_up_to: int = 4, node_cap: int | None = None
) -> NiceTreeDecomposition:
    """Nice tree decomposition of the graph; exact when its treewidth is at most
    ``exact_up_to`` and the graph is small, min-fill otherwise."""
    edges = list(edges)
    order = min_fill_order(n, edges)
    width = _order_width(n, edges, order)
    lower = 1 if edges else 0
    if width > lower and n <= 24:
        try:
            better = exact_elimination_order(n, edges, min(width - 1, exact_up_to), node_cap=node_cap)
        except SearchBudgetExceeded:
            better = None
        if better is not None:
            order = better
    return _from_order(n, edges, order)


# --- the dynamic program ---------------------------------------------------

IDLE = (0, -1)
RECV, DON = 1, 2


def _insert_bit(mask: int, p: int, bit: int) -> int:
    return (mask & ((1 << p) - 1)) | (bit << p) | ((mask >> p) << (p + 1))


def _remove_bit(mask: int, p: int) -> int:
    return (mask & ((1 << p) - 1)) | ((mask >> (p + 1)) << p)


def _postorder(dec: NiceTreeDecomposition) -> list[int]:
    out = []
    stack = [(dec.root, False)]
    while stack:
        t, expanded = stack.pop()
        if expanded:
            out.append(t)
        else:
            stack.append((t, True))
            stack.extend((c, False) for c in dec.nodes[t].children)
    return out


def solve_ersa_treewidth(
    instance: Instance,
    decomposition: NiceTreeDecomposition | None = None,
    k: int | None = None,
):
    """Minimum number of envious agents over simple 2-sharings.

    Returns ``(answer, minimum, witness)``; ``answer`` is ``minimum <= k`` (``None``
    without ``k``). A decomposition is built when none is given.
    """
    if not instance.attention_matches_sharing:
        raise ValueError("treewidth DP needs the attention graph's underlying graph to equal the sharing graph")
    if k is not None and k < 0:
        raise ValueError("k must be non-negative")
    n = instance.n
    edges = instance.sorted_edges
    if decomposition is None:
        decomposition = build_nice_decomposition(n, edges)
    decomposition.validate(n, edges)
    if decomposition.root is None:
        return (True if k is not None else None), 0, Sharing()

    sv = ScaledValues(instance)
    u = instance.utilities
    ext = instance.extension
    budget = ext.budget
    owner = instance.owner
    arcs = instance.attention_arcs
    nodes = decomposition.nodes

    # sharing states per agent; with alpha = 1 states that cannot help are dropped
    prune = ext.alpha == 1
    states: list[list[tuple[int, int]]] = []
    for v in range(n):
        opts = [IDLE]
        for d in instance.neighbors[v]:
            for r in instance.owned[d]:
                if not prune or (sv.gain and u[v][r]):
                    opts.append((RECV, r))
        for r in instance.owned[v]:
            if instance.neighbors[v] and (
                not prune or any(sv.gain and u[q][r] for q in instance.neighbors[v])
            ):
                opts.append((DON, r))
        states.append(opts)

    def value(viewer: int, holder: int, s: tuple[int, int]) -> int:
        kind, r = s
        v = sv.base[viewer][holder]
        if kind == RECV:
            v += sv.gain * u[viewer][r]
        elif kind == DON:
            v -= sv.loss * u[viewer][r]
        return v

    # designated node per edge: topmost node holding both endpoints
    parent: dict[int, int] = {}
    for t, node in enumerate(nodes):
        for c in node.children:
            parent[c] = t
    activate: dict[int, list[tuple[int, int]]] = {}
    for i, j in edges:
        for t, node in enumerate(nodes):
            if i in node.bag and j in node.bag:
                p = parent.get(t)
                if p is None or not (i in nodes[p].bag and j in nodes[p].bag):
                    activate.setdefault(t, []).append((i, j))
                    break

    layers: dict[int, list[dict]] = {}
    order_of: dict[int, list[int]] = {}

    def put(table: dict, key, cnt: int, back) -> None:
        old = table.get(key)
        if old is None or cnt < old[0]:
            table[key] = (cnt, back)

    for t in _postorder(decomposition):
        node = nodes[t]
        bag_order = sorted(node.bag)
        order_of[t] = bag_order
        table: dict = {}
        if node.kind == LEAF:
            table[((), 0, 0, 0)] = (0, ("leaf",))
        elif node.kind == INTRODUCE:
            c = node.children[0]
            v = node.vertex
            p = bag_order.index(v)
            others = order_of[c]
            for key, (cnt, _) in layers[c][-1].items():
                sts, paired, envy, cost = key
                for s in states[v]:
                    e = envy
                    mine = value(v, v, s)
                    v_envy = 0
                    for x, sx in enumerate(sts):
                        w = others[x]
                        if (v, w) in arcs and mine < value(v, w, sx):
                            v_envy = 1
                        if (w, v) in arcs and value(w, w, sx) < value(w, v, s):
                            e |= 1 << x
                    nkey = (
                        sts[:p] + (s,) + sts[p:],
                        _insert_bit(paired, p, 0),
                        _insert_bit(e, p, v_envy),
                        cost,
                    )
                    put(table, nkey, cnt, ("child", key))
        elif node.kind == FORGET:
            c = node.children[0]
            p = order_of[c].index(node.vertex)
            for key, (cnt, _) in layers[c][-1].items():
                sts, paired, envy, cost = key
                if sts[p] != IDLE and not (paired >> p) & 1:
                    continue
                nkey = (sts[:p] + sts[p + 1 :], _remove_bit(paired, p), _remove_bit(envy, p), cost)
                put(table, nkey, cnt + ((envy >> p) & 1), ("child", key))
        else:
            c1, c2 = node.children
            right: dict = {}
            for key, val in layers[c2][-1].items():
                right.setdefault(key[0], []).append((key, val))
            for k1, (n1, _) in layers[c1][-1].items():
                for k2, (n2, _) in right.get(k1[0], ()):
                    if k1[1] & k2[1]:
                        continue
                    cost = k1[3] + k2[3]
                    if budget is not None and cost > budget:
                        continue
                    put(table, (k1[0], k1[1] | k2[1], k1[2] | k2[2], cost), n1 + n2, ("join", k1, k2))
        layers[t] = [table]

        for i, j in activate.get(t, ()):
            pi, pj = bag_order.index(i), bag_order.index(j)
            c_ij = ext.cost(i, j)
            prev = layers[t][-1]
            nxt = dict(prev)
            layer_no = len(layers[t]) - 1
            for key, (cnt, _) in prev.items():
                sts, paired, envy, cost = key
                if (paired >> pi) & 1 or (paired >> pj) & 1:
                    continue
                si, sj = sts[pi], sts[pj]
                if si[0] == DON and sj == (RECV, si[1]):
                    d, q, r = i, j, si[1]
                elif sj[0] == DON and si == (RECV, sj[1]):
                    d, q, r = j, i, sj[1]
                else:
                    continue
                if budget is not None and cost + c_ij > budget:
                    continue
                assert owner[r] == d
                nkey = (sts, paired | (1 << pi) | (1 << pj), envy, cost + c_ij)
                put(nxt, nkey, cnt, ("act", layer_no, key, (d, q, r)))
            layers[t].append(nxt)

    root = decomposition.root
    best = None
    for key, (cnt, _) in layers[root][-1].items():
        sts, paired, envy, _ = key
        if any(s != IDLE and not (paired >> x) & 1 for x, s in enumerate(sts)):
            continue
        total = cnt + bin(envy).count("1")
        if best is None or total < best[0]:
            best = (total, key)
    minimum, key = best

    transfers = []
    stack = [(root, len(layers[root]) - 1, key)]
    while stack:
        t, layer_no, key = stack.pop()
        back = layers[t][layer_no][key][1]
        if back[0] == "act":
            transfers.append(back[3])
            stack.append((t, back[1], back[2]))
        elif back[0] == "child":
            c = nodes[t].children[0]
            stack.append((c, len(layers[c]) - 1, back[1]))
        elif back[0] == "join":
            c1, c2 = nodes[t].children
            stack.append((c1, len(layers[c1]) - 1, back[1]))
            stack.append((c2, len(layers[c2]) - 1, back[2]))
    witness = Sharing.from_transfers(transfers)
    assert len(envious_agents(instance, witness).envious) == minimum
    return (None if k is None else minimum <= k), minimum, witness
