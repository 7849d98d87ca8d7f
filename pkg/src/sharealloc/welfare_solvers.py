"""Welfare-maximizing sharings.

Utilitarian welfare for any bound b and egalitarian welfare for simple sharings
reduce to matching problems; egalitarian welfare with b >= 2 is NP-hard and is
handled by an exhaustive search with a node cap.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import NamedTuple

from ._limits import NodeCounter, node_cap as _node_cap
from ._values import ScaledValues
from .matching import WeightedGraph, max_cardinality_bipartite_matching, max_weight_matching, solve_wbmm
from .model import Instance, Sharing, edge_key, welfare

__all__ = [
    "UWSAResult",
    "solve_uwsa",
    "solve_ewsa_simple",
    "maximize_ewsa_simple",
    "solve_ewsa_bounded_exact",
]


class UWSAResult(NamedTuple):
    answer: bool
    witness: Sharing
    optimum: Fraction


def solve_uwsa(instance: Instance, b: int, k) -> UWSAResult:
    """Maximum utilitarian welfare over b-bounded 2-sharings, via one weighted matching.

    Every agent gets one vertex per owned resource (padded with zero-value
    resources up to ``b``) and ``|owned| - b`` dummy vertices tied to its own
    vertices, so at most ``b`` of its vertices can pair with other agents. A
    cross edge between vertices of two neighbours is worth the best welfare gain
    of sharing either vertex's resource across that edge.

    Returns ``(answer, witness, optimum)`` with ``answer`` true iff the optimum is
    at least ``k``.
    """
    if b < 1:
        raise ValueError("b must be at least 1")
    if instance.extension.budget is not None:
        raise ValueError("the matching reduction for utilitarian welfare does not support a sharing budget")
    sv = ScaledValues(instance)
    u = instance.utilities
    m = instance.m

    # vertices: (agent, resource); resources >= m are zero-value padding
    owned: list[list[int]] = []
    pad = m
    for i in range(instance.n):
        res = list(instance.owned[i])
        while len(res) < b:
            res.append(pad)
            pad += 1
        owned.append(res)
    vertex_of: dict[tuple[int, int], int] = {}
    agent_of: list[int] = []
    resource_of: list[int] = []
    for i, res in enumerate(owned):
        for r in res:
            vertex_of[(i, r)] = len(agent_of)
            agent_of.append(i)
            resource_of.append(r)

    def gain(d: int, q: int, r: int) -> int:
        if r >= m:
            return 0
        return sv.gain * u[q][r] - sv.loss * u[d][r]

    edges: list[tuple[int, int, int]] = []
    for i1, i2 in instance.sorted_edges:
        for j1 in owned[i1]:
            for j2 in owned[i2]:
                w = max(gain(i2, i1, j2), gain(i1, i2, j1))
                if w > 0:
                    edges.append((vertex_of[(i1, j1)], vertex_of[(i2, j2)], w))

    top = sv.scale * max((x for row in u for x in row), default=0)
    first_dummy = len(agent_of)
    dummies: list[list[int]] = []
    nxt = first_dummy
    for i, res in enumerate(owned):
        ds = list(range(nxt, nxt + len(res) - b))
        nxt += len(ds)
        dummies.append(ds)
        for d in ds:
            edges.extend((vertex_of[(i, r)], d, top) for r in res)
    penalty = top * (nxt - first_dummy)

    matching = max_weight_matching(WeightedGraph(nxt, tuple(edges)))
    weight = {(x, y): w for x, y, w in edges}
    mate: dict[int, int] = {}
    for x, y in matching.edges:
        mate[x], mate[y] = y, x

    # An optimum may leave a dummy free while its agent pairs more than b
    # vertices; trading a cross edge for a dummy edge never loses weight.
    for i, res in enumerate(owned):
        vs = [vertex_of[(i, r)] for r in res]
        free_dummies = [d for d in dummies[i] if d not in mate]
        crossing = [v for v in vs if v in mate and mate[v] < first_dummy]
        while len(crossing) > b:
            v = crossing.pop()
            other = mate.pop(v)
            del mate[other]
            d = free_dummies.pop()
            mate[v], mate[d] = d, v
        free_vs = [v for v in vs if v not in mate]
        for d in [d for d in dummies[i] if d not in mate]:
            v = free_vs.pop()
            mate[v], mate[d] = d, v

    total = 0
    transfers = []
    for x, y in {edge_key(x, y) for x, y in mate.items()}:
        if y >= first_dummy:
            total += top
            continue
        w = weight[(x, y)]
        total += w
        i1, j1, i2, j2 = agent_of[x], resource_of[x], agent_of[y], resource_of[y]
        if gain(i1, i2, j1) >= gain(i2, i1, j2):
            transfers.append((i1, i2, j1))
        else:
            transfers.append((i2, i1, j2))
    witness = Sharing.from_transfers(transfers, bound=b)

    base = sum(instance.initial_utility(i) for i in range(instance.n))
    optimum = base + Fraction(total - penalty, sv.scale)
    answer = total >= (Fraction(k) - base) * sv.scale + penalty
    assert welfare(instance, witness)[0] == optimum
    return UWSAResult(answer, witness, optimum)


def _ewsa_graph(instance: Instance, k: Fraction):
    """Split agents by threshold ``k`` and collect admissible donor-recipient pairs."""
    ext = instance.extension
    rich = [i for i in range(instance.n) if instance.initial_utility(i) >= k]
    poor = [i for i in range(instance.n) if instance.initial_utility(i) < k]
    rich_set = set(rich)
    pairs: dict[tuple[int, int], int] = {}  # (donor, recipient) -> resource
    for j in poor:
        uj = instance.utilities[j]
        for i in instance.neighbors[j]:
            if i not in rich_set:
                continue
            ui = instance.utilities[i]
            for r in instance.owned[i]:
                if (
                    instance.initial_utility(j) + ext.beta * uj[r] >= k
                    and instance.initial_utility(i) - (1 - ext.alpha) * ui[r] >= k
                ):
                    pairs[(i, j)] = r
                    break
    return rich, poor, pairs


def solve_ewsa_simple(instance: Instance, k) -> tuple[bool, Sharing | None]:
    """Is there a simple 2-sharing with egalitarian welfare at least ``k``?

    Agents below ``k`` must each be lifted by a distinct neighbour at or above
    ``k`` that stays at or above ``k``; this is a bipartite matching that has to
    saturate the agents below ``k`` (with total cost within the budget, if any).
    """
    k = Fraction(k)
    rich, poor, pairs = _ewsa_graph(instance, k)
    if not poor:
        return True, Sharing()
    budget = instance.extension.budget
    if budget is None:
        li = {a: x for x, a in enumerate(rich)}
        ri = {a: x for x, a in enumerate(poor)}
        mt = max_cardinality_bipartite_matching(
            len(rich), len(poor), [(li[i], ri[j]) for i, j in pairs]
        )
        if mt.cardinality < len(poor):
            return False, None
        chosen = [(rich[x], poor[y]) for x, y in mt.edges]
    else:
        g = WeightedGraph(
            instance.n, tuple((*edge_key(i, j), instance.extension.cost(i, j)) for i, j in pairs)
        )
        ok, mt = solve_wbmm(g, budget, len(poor))
        if not ok:
            return False, None
        rich_set = set(rich)
        chosen = [(x, y) if x in rich_set else (y, x) for x, y in mt.edges]
    return True, Sharing.from_transfers([(i, j, pairs[(i, j)]) for i, j in chosen])


def _ewsa_candidates(instance: Instance) -> list[Fraction]:
    ext = instance.extension
    out: set[Fraction] = set()
    for i in range(instance.n):
        base = Fraction(instance.initial_utility(i))
        out.add(base)
        ui = instance.utilities[i]
        mine = instance.allocation[i]
        for r in range(instance.m):
            if r in mine:
                if ext.alpha < 1:
                    out.add(base - (1 - ext.alpha) * ui[r])
            else:
                out.add(base + ext.beta * ui[r])
    return sorted(out)


def maximize_ewsa_simple(instance: Instance) -> tuple[Fraction, Sharing]:
    """Largest egalitarian welfare of a simple 2-sharing, with a witness.

    The optimum is some agent's final value, so it lies in a finite candidate set;
    feasibility is downward closed in ``k``, which allows a binary search.
    """
    cands = _ewsa_candidates(instance)
    lo, hi = 0, len(cands) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        ok, wit = solve_ewsa_simple(instance, cands[mid])
        if ok:
            best = (cands[mid], wit)
            lo = mid + 1
        else:
            hi = mid - 1
    # the smallest candidate is never above the empty sharing's welfare
    assert best is not None
    value = welfare(instance, best[1])[1]
    assert value >= best[0]
    return value, best[1]


def solve_ewsa_bounded_exact(
    instance: Instance, b: int, k, *, node_cap: int | None = None
) -> tuple[bool, Sharing | None]:
    """Exact decision for egalitarian welfare >= ``k`` over b-bounded 2-sharings.

    Depth-first search that always repairs the poorest agent still below ``k``
    (lowest initial utility first) by trying every resource it could still
    receive. Branches are cut when some agent below ``k`` cannot reach ``k`` even
    if it received its best remaining options. Raises ``SearchBudgetExceeded``
    once the node cap is hit.
    """
    if b < 1:
        raise ValueError("b must be at least 1")
    k = Fraction(k)
    sv = ScaledValues(instance)
    target = ceil(k * sv.scale)
    n = instance.n
    u = instance.utilities
    ext = instance.extension
    budget = ext.budget
    counter = NodeCounter(_node_cap(node_cap), "too large for exact b-EWSA")
    order = sorted(range(n), key=lambda a: (instance.initial_utility(a), a))

    val = [sv.base[i][i] for i in range(n)]
    load = [0] * n
    used: set[int] = set()
    chosen: list[tuple[int, int, int]] = []
    seen: set[frozenset] = set()

    def options(a: int):
        for d in instance.neighbors[a]:
            if load[d] >= b:
                continue
            for r in instance.owned[d]:
                if r not in used and u[a][r] > 0 and sv.gain > 0:
                    yield d, r

    def hopeless() -> bool:
        for a in range(n):
            if val[a] >= target:
                continue
            room = b - load[a]
            gains = sorted((sv.gain * u[a][r] for _, r in options(a)), reverse=True)[:room]
            if val[a] + sum(gains) < target:
                return True
        return False

    def rec(spent: int) -> bool:
        counter.tick()
        poor = next((a for a in order if val[a] < target), None)
        if poor is None:
            return True
        if load[poor] >= b or hopeless():
            return False
        for d, r in list(options(poor)):
            c = ext.cost(d, poor)
            if budget is not None and spent + c > budget:
                continue
            key = frozenset(chosen + [(d, poor, r)])
            if key in seen:
                continue
            seen.add(key)
            used.add(r)
            load[d] += 1
            load[poor] += 1
            val[poor] += sv.gain * u[poor][r]
            val[d] -= sv.loss * u[d][r]
            chosen.append((d, poor, r))
            if rec(spent + c):
                return True
            chosen.pop()
            val[d] += sv.loss * u[d][r]
            val[poor] -= sv.gain * u[poor][r]
            load[poor] -= 1
            load[d] -= 1
            used.discard(r)
        return False

    if rec(0):
        return True, Sharing.from_transfers(chosen, bound=b)
    return False, None

