"""Envy reduction when everyone shares one utility function and watches everyone.

With identical utilities and a bidirectional clique of attention, an agent is
non-envious exactly when its value equals the maximum value ``u*`` after sharing.
So we guess ``u*`` and count how many agents can sit at exactly ``u*``.
"""

from __future__ import annotations

from .._values import ScaledValues
from ..matching import WeightedGraph, max_weight_matching, solve_wbmm
from ..model import Instance, Sharing

__all__ = ["solve_ersa_identical_clique"]


def _check(instance: Instance) -> None:
    if not instance.identical_utilities:
        raise ValueError("identical-clique solver needs all agents to share one utility function")
    if not instance.attention_is_bidirectional_clique:
        raise ValueError("identical-clique solver needs a bidirectional clique of attention")


def _lift_only(instance: Instance, sv: ScaledValues):
    """alpha = 1: donors keep their value, so only raising agents to u* helps.

    Candidates are the initial maximum and every reachable value above it. For a
    candidate, agents already at u* are fine; an edge is useful when one endpoint
    below u* reaches exactly u* with a resource of the other. A maximum matching
    (cheapest one of each size under a budget) counts how many can be lifted.
    """
    n = instance.n
    u = instance.utilities[0]
    base = [sv.base[0][i] for i in range(n)]
    u0 = max(base)
    cands = {u0}
    for i in range(n):
        for r in range(instance.m):
            if instance.owner[r] != i and base[i] + sv.gain * u[r] >= u0:
                cands.add(base[i] + sv.gain * u[r])
    budget = instance.extension.budget
    best = None
    for star in sorted(cands):
        at_star = {i for i in range(n) if base[i] == star}
        lift: dict[tuple[int, int], tuple[int, int, int]] = {}
        for i, j in instance.sorted_edges:
            for d, q in ((j, i), (i, j)):
                if q in at_star or (i, j) in lift:
                    continue
                r = next((r for r in instance.owned[d] if base[q] + sv.gain * u[r] == star), None)
                if r is not None:
                    lift[(i, j)] = (d, q, r)
        if budget is None:
            mt = max_weight_matching(WeightedGraph(n, tuple((i, j, 1) for i, j in lift)))
        else:
            g = WeightedGraph(n, tuple((i, j, instance.extension.cost(i, j)) for i, j in lift))
            mt = None
            for size in range(n // 2, -1, -1):
                ok, found = solve_wbmm(g, budget, size)
                if ok:
                    mt = found
                    break
        count = len(at_star) + mt.cardinality
        if best is None or count > best[0]:
            best = (count, [lift[e] for e in sorted(mt.edges)])
    return best


def _general(instance: Instance, sv: ScaledValues):
    """Any alpha: donors may drop, which both creates and destroys candidates.

    For a candidate u*, agents starting above u* must donate down to at most u*,
    nobody may end above u*, and we maximize the number of agents ending exactly
    at u*. That is a maximum weight matching where edges covering a forced donor
    carry a bonus large enough to be preferred over everything else.
    """
    n = instance.n
    u = instance.utilities[0]
    base = [sv.base[0][i] for i in range(n)]
    cands = set(base)
    for i in range(n):
        for r in range(instance.m):
            if instance.owner[r] == i:
                cands.add(base[i] - sv.loss * u[r])
            else:
                cands.add(base[i] + sv.gain * u[r])
    big = 2 * n + 3
    best = None
    for star in sorted(cands):
        forced = [base[i] > star for i in range(n)]
        idle_hit = [base[i] == star for i in range(n)]
        options: dict[tuple[int, int], tuple[int, tuple[int, int, int]]] = {}
        for i, j in instance.sorted_edges:
            top = None
            for d, q in ((i, j), (j, i)):
                for r in instance.owned[d]:
                    fd = base[d] - sv.loss * u[r]
                    fq = base[q] + sv.gain * u[r]
                    if fd > star or fq > star:
                        continue
                    score = (fd == star) + (fq == star) - idle_hit[d] - idle_hit[q]
                    if top is None or score > top[0]:
                        top = (score, (d, q, r))
            if top is not None:
                options[(i, j)] = top
        edges = []
        for (i, j), (score, _) in options.items():
            w = score + big * (forced[i] + forced[j])
            if w > 0:
                edges.append((i, j, w))
        mt = max_weight_matching(WeightedGraph(n, tuple(edges)))
        covered = {x for e in mt.edges for x in e}
        if any(forced[i] and i not in covered for i in range(n)):
            continue
        count = sum(idle_hit[i] for i in range(n) if i not in covered)
        count += sum(options[e][0] + idle_hit[e[0]] + idle_hit[e[1]] for e in mt.edges)
        if best is None or count > best[0]:
            best = (count, [options[e][1] for e in sorted(mt.edges)])
    return best


def solve_ersa_identical_clique(instance: Instance, k: int | None = None):
    """Minimum number of envious agents over simple 2-sharings, in polynomial time.

    Requires identical utilities and a bidirectional clique of attention. Returns
    ``(answer, minimum, witness)`` where ``answer`` is ``minimum <= k`` (``None``
    when ``k`` is not given). Candidates for the final maximum are tried in
    ascending order; ties keep the smallest.
    """
    _check(instance)
    if k is not None and k < 0:
        raise ValueError("k must be non-negative")
    if instance.n == 0:
        return (True if k is not None else None), 0, Sharing()
    sv = ScaledValues(instance)
    if instance.extension.alpha == 1:
        count, transfers = _lift_only(instance, sv)
    else:
        if instance.extension.budget is not None:
            raise ValueError("identical-clique solver supports a budget only when alpha = 1")
        count, transfers = _general(instance, sv)
    minimum = instance.n - count
    witness = Sharing.from_transfers(transfers)
    return (None if k is None else minimum <= k), minimum, witness

