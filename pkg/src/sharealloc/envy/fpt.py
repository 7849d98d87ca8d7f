"""Envy reduction by guessing the non-envious agents and who shares with whom.

A *configuration* is a target set ``C`` of agents that must end up non-envious
plus a set of vertex-disjoint arcs ``(donor, recipient)`` along sharing edges.
Given a configuration, only the resource carried by each arc remains open, and
:func:`feasible_realization_exists` decides whether some choice leaves every
target agent envy-free. :func:`solve_ersa_fpt_agents` enumerates target sets of
size ``n - k`` and all their configurations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

from .._limits import node_cap as _node_cap
from .._values import ScaledValues
from ..model import Instance, Sharing, edge_key

__all__ = [
    "DUMMY",
    "SharingConfiguration",
    "PossibleResourceSets",
    "feasible_realization_exists",
    "solve_ersa_fpt_agents",
    "min_envy_fpt",
    "colex_subsets",
    "configurations",
]

DUMMY = -1  # the placeholder resource worth 0 to everyone; choosing it drops the arc


@dataclass(frozen=True)
class SharingConfiguration:
    target: frozenset[int]
    arcs: frozenset[tuple[int, int]]

    def __init__(self, target: Iterable[int], arcs: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "target", frozenset(target))
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in arcs))

    def check(self, instance: Instance, *, heads_in_target: bool = True) -> None:
        """Raise ``ValueError`` unless the arcs are vertex-disjoint sharing-graph arcs
        (pointing into the target set when ``heads_in_target``)."""
        seen: set[int] = set()
        for a in self.target:
            if not 0 <= a < instance.n:
                raise ValueError(f"unknown target agent {a}")
        for d, q in self.arcs:
            if edge_key(d, q) not in instance.sharing_edges:
                raise ValueError(f"arc ({d},{q}) is not along a sharing edge")
            if heads_in_target and q not in self.target:
                raise ValueError(f"arc ({d},{q}) points outside the target set")
            if d in seen or q in seen:
                raise ValueError("configuration arcs must be vertex-disjoint")
            seen.update((d, q))


@dataclass
class PossibleResourceSets:
    """Candidate received resources per target agent, and the threshold each must reach."""

    sets: dict[int, list[int]]
    thresholds: dict[int, int | None]


def _realize_base(instance: Instance, config: SharingConfiguration):
    """Threshold filtering followed by forbidden-resource elimination (base model)."""
    C = config.target
    u = instance.utilities
    bv = instance.bundle_value
    donor_of = {q: d for d, q in config.arcs}

    def own(i: int, r: int) -> int:
        return bv[i][i] + (u[i][r] if r != DUMMY else 0)

    def seen_as(j: int, i: int, r: int) -> int:  # j looks at i after i received r
        return bv[j][i] + (u[j][r] if r != DUMMY else 0)

    sets: dict[int, list[int]] = {}
    thresholds: dict[int, int | None] = {}
    for i in C:
        start = list(instance.owned[donor_of[i]]) + [DUMMY] if i in donor_of else [DUMMY]
        outside = [bv[i][j] for j in instance.out_neighbors[i] if j not in C]
        t = max(outside) if outside else None
        thresholds[i] = t
        sets[i] = [r for r in start if t is None or own(i, r) >= t]

    lookers = {i: [j for j in instance.in_neighbors[i] if j in C] for i in C}
    while True:
        best = {j: max((own(j, r) for r in sets[j]), default=None) for j in C}
        removed = False
        for i in C:
            keep = [
                r
                for r in sets[i]
                if not any(best[j] is None or best[j] < seen_as(j, i, r) for j in lookers[i])
            ]
            if len(keep) != len(sets[i]):
                sets[i] = keep
                removed = True
        if not removed:
            break
    return PossibleResourceSets(sets, thresholds)


def _pick(values: list[int], score) -> int:
    """Highest-scoring candidate; real resources before the dummy, then lowest index."""
    return max(values, key=lambda r: (score(r), r != DUMMY, -r))


def _feasible_base(instance: Instance, config: SharingConfiguration):
    prs = _realize_base(instance, config)
    if any(not s for s in prs.sets.values()):
        return False, None
    u = instance.utilities
    choice = {}
    for d, q in config.arcs:
        choice[(d, q)] = _pick(prs.sets[q], lambda r: u[q][r] if r != DUMMY else 0)
    return True, choice


def _feasible_extended(instance: Instance, config: SharingConfiguration):
    """Resource choice per arc under loss factors and a budget.

    Every agent's own value and every perceived value depends on the single arc
    touching that agent, so the question is a constraint problem over the arcs.
    Values that no choice of the looking agent's arc can support are eliminated
    to a fixpoint (the forbidden-resource rule, now also applied to donors). With
    alpha = 1 every arc affects only its recipient's own value and picking each
    recipient's best surviving resource is a solution; with alpha < 1 a donor's
    and its recipient's preferences pull apart, so the surviving values are
    searched exhaustively.
    """
    ext = instance.extension
    if ext.budget is not None and sum(ext.cost(d, q) for d, q in config.arcs) > ext.budget:
        return False, None
    sv = ScaledValues(instance)
    u = instance.utilities
    C = config.target
    arcs = sorted(config.arcs)
    arc_of: dict[int, int] = {}
    role: dict[int, int] = {}  # +1 receives, -1 donates
    for idx, (d, q) in enumerate(arcs):
        arc_of[d], role[d] = idx, -1
        arc_of[q], role[q] = idx, 1
    domain = [list(instance.owned[d]) + [DUMMY] for d, _ in arcs]

    def value(viewer: int, holder: int, r: int) -> int:
        v = sv.base[viewer][holder]
        if r == DUMMY:
            return v
        if role[holder] > 0:
            return v + sv.gain * u[viewer][r]
        return v - sv.loss * u[viewer][r]

    def fixed(viewer: int, holder: int) -> int:
        return sv.base[viewer][holder]

    # constraint (z, x): value(z, z, .) >= value(z, x, .)
    unary: list[tuple[int, int, int]] = []  # (arc, z, x)
    binary: list[tuple[int, int, int, int]] = []  # (arc_z, arc_x, z, x)
    for z in sorted(C):
        for x in instance.out_neighbors[z]:
            az, ax = arc_of.get(z), arc_of.get(x)
            if az is None and ax is None:
                if fixed(z, z) < fixed(z, x):
                    return False, None
            elif az is None or ax is None or az == ax:
                unary.append((az if az is not None else ax, z, x))
            else:
                binary.append((az, ax, z, x))

    def holds(z: int, x: int, a: int, r: int, b: int | None = None, s: int | None = None) -> bool:
        """Constraint (z, x) with arc ``a`` carrying ``r`` (and arc ``b`` carrying ``s``)."""
        rz = rx = None
        for arc, res in ((a, r), (b, s)):
            if arc is None:
                continue
            if arc_of.get(z) == arc:
                rz = res
            if arc_of.get(x) == arc:
                rx = res
        mine = value(z, z, rz) if rz is not None else fixed(z, z)
        theirs = value(z, x, rx) if rx is not None else fixed(z, x)
        return mine >= theirs

    for a, z, x in unary:
        domain[a] = [r for r in domain[a] if holds(z, x, a, r)]
    changed = True
    while changed:
        changed = False
        if any(not d for d in domain):
            return False, None
        for az, ax, z, x in binary:
            if not domain[az]:
                return False, None
            best = max(value(z, z, r) for r in domain[az])
            keep = [r for r in domain[ax] if best >= value(z, x, r)]
            if len(keep) != len(domain[ax]):
                domain[ax] = keep
                changed = True
    if any(not d for d in domain):
        return False, None

    if ext.alpha == 1:
        chosen = []
        for (d, q), dom in zip(arcs, domain):
            chosen.append(_pick(dom, lambda r: value(q, q, r)))
        return True, dict(zip(arcs, chosen))

    # alpha < 1: backtracking over the pruned domains
    by_arc: dict[int, list[tuple[int, int, int, int]]] = {}
    for az, ax, z, x in binary:
        by_arc.setdefault(max(az, ax), []).append((az, ax, z, x))
    chosen = [DUMMY] * len(arcs)

    def rec(a: int) -> bool:
        if a == len(arcs):
            return True
        for r in sorted(domain[a], key=lambda r: (r == DUMMY, r)):
            chosen[a] = r
            if all(holds(z, x, az, chosen[az], ax, chosen[ax]) for az, ax, z, x in by_arc.get(a, ())):
                if rec(a + 1):
                    return True
        return False

    if rec(0):
        return True, dict(zip(arcs, chosen))
    return False, None


def feasible_realization_exists(
    instance: Instance,
    target: Iterable[int],
    arcs: Iterable[tuple[int, int]],
    *,
    extended: bool | None = None,
) -> tuple[bool, dict[tuple[int, int], int | None] | None]:
    """Can each arc carry one resource so that no target agent is envious?

    Returns ``(answer, choice)`` where ``choice`` maps every arc to the resource it
    carries, or to ``None`` when the arc is better left unused. ``extended``
    selects the loss/budget-aware procedure; by default it is used exactly when
    the instance is not in the base model. The base procedure requires arcs to
    point into the target set; the extended one also accepts arcs leaving it,
    which matter when donors lose value (alpha < 1).
    """
    config = SharingConfiguration(target, arcs)
    if extended is None:
        extended = not instance.extension.is_base
    if not extended and not instance.extension.is_base:
        raise ValueError("the base procedure needs alpha = beta = 1 and no budget")
    config.check(instance, heads_in_target=not extended or instance.extension.alpha == 1)
    ok, choice = (_feasible_extended if extended else _feasible_base)(instance, config)
    if not ok:
        return False, None
    return True, {a: (None if r == DUMMY else r) for a, r in choice.items()}


def colex_subsets(n: int, size: int) -> Iterator[tuple[int, ...]]:
    """``size``-subsets of ``range(n)`` in colexicographic order."""
    if size == 0:
        yield ()
        return
    for last in range(size - 1, n):
        for rest in colex_subsets(last, size - 1):
            yield rest + (last,)


def configurations(instance: Instance, target: frozenset[int], *, into_target: bool = True):
    """Every set of vertex-disjoint arcs along sharing edges, by depth-first search.

    With ``into_target`` only arcs whose recipient is in ``target`` are used, and
    (in the base model) only arcs whose donor owns something the recipient values.
    """
    n = instance.n
    ext = instance.extension
    useful_only = ext.alpha == 1
    u = instance.utilities
    options: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, j in instance.sorted_edges:
        for d, q in ((i, j), (j, i)):
            if into_target and q not in target:
                continue
            if not instance.owned[d]:
                continue
            if useful_only and (ext.beta == 0 or not any(u[q][r] for r in instance.owned[d])):
                continue
            options[min(d, q)].append((d, q))
    busy = [False] * n
    arcs: list[tuple[int, int]] = []

    def rec(a: int):
        while a < n and busy[a]:
            a += 1
        if a == n:
            yield frozenset(arcs)
            return
        busy[a] = True
        yield from rec(a + 1)
        for d, q in options[a]:
            other = q if d == a else d
            if busy[other]:
                continue
            busy[other] = True
            arcs.append((d, q))
            yield from rec(a + 1)
            arcs.pop()
            busy[other] = False
        busy[a] = False

    yield from rec(0)


def _envy_count(instance: Instance, sharing: Sharing) -> int:
    from ..model import envious_agents

    return len(envious_agents(instance, sharing).envious)


def solve_ersa_fpt_agents(
    instance: Instance, k: int, *, extended: bool | None = None, node_cap: int | None = None
) -> tuple[bool, Sharing | None]:
    """Is there a simple 2-sharing leaving at most ``k`` agents envious?

    Enumerates target sets of exactly ``n - k`` agents in colex order and, for
    each, every sharing configuration, stopping at the first feasible one.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    n = instance.n
    if extended is None:
        extended = not instance.extension.is_base
    cap = _node_cap(node_cap)
    if (2 * n) ** n > cap:
        warnings.warn(
            f"configuration space estimate (2n)^n = {(2 * n) ** n} exceeds the node cap {cap}",
            RuntimeWarning,
            stacklevel=2,
        )
    if k >= n or _envy_count(instance, Sharing()) <= k:
        return True, Sharing()
    into = not extended or instance.extension.alpha == 1
    for C in colex_subsets(n, n - k):
        target = frozenset(C)
        for arcs in configurations(instance, target, into_target=into):
            ok, choice = feasible_realization_exists(instance, target, arcs, extended=extended)
            if ok:
                transfers = [(d, q, r) for (d, q), r in choice.items() if r is not None]
                return True, Sharing.from_transfers(transfers)
    return False, None


def min_envy_fpt(instance: Instance, **kwargs) -> tuple[int, Sharing]:
    """Smallest ``k`` accepted by :func:`solve_ersa_fpt_agents`, with its witness."""
    for k in range(instance.n + 1):
        ok, wit = solve_ersa_fpt_agents(instance, k, **kwargs)
        if ok:
            return k, wit
    raise AssertionError("k = n is always feasible")
