"""Brute-force ground truth over every valid b-bounded 2-sharing.

Only meant for small instances. The enumeration walks resources in ascending
order and, for each, either keeps it unshared or hands it to one neighbour of
its owner (neighbours ascending), pruning as soon as an agent would take part
in more than ``b`` shares or the budget would be exceeded. Each sharing is
produced exactly once, the empty sharing first.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple

from ._limits import NodeCounter, node_cap as _node_cap
from .model import Instance, Sharing

__all__ = [
    "enumerate_sharings",
    "min_envy_bruteforce",
    "max_welfare_bruteforce",
    "WelfareOptimum",
]


def _transfers(instance: Instance, b: int, cap: int | None) -> Iterator[list[tuple[int, int, int]]]:
    if b < 1:
        raise ValueError("b must be at least 1")
    counter = NodeCounter(_node_cap(cap), "brute-force enumeration")
    ext = instance.extension
    budget = ext.budget
    owner = instance.owner
    nbrs = instance.neighbors
    load = [0] * instance.n
    chosen: list[tuple[int, int, int]] = []
    m = instance.m

    def rec(r: int, spent: int):
        counter.tick()
        if r == m:
            yield chosen
            return
        yield from rec(r + 1, spent)
        d = owner[r]
        if load[d] >= b:
            return
        for q in nbrs[d]:
            if load[q] >= b:
                continue
            c = ext.cost(d, q)
            if budget is not None and spent + c > budget:
                continue
            load[d] += 1
            load[q] += 1
            chosen.append((d, q, r))
            yield from rec(r + 1, spent + c)
            chosen.pop()
            load[d] -= 1
            load[q] -= 1

    yield from rec(0, 0)


def enumerate_sharings(instance: Instance, b: int = 1, *, node_cap: int | None = None) -> Iterator[Sharing]:
    """Yield every valid ``b``-bounded 2-sharing within the budget, exactly once.

    Raises :class:`~sharealloc._limits.SearchBudgetExceeded` once more than
    ``node_cap`` search nodes have been visited.
    """
    for transfers in _transfers(instance, b, node_cap):
        yield Sharing.from_transfers(transfers, bound=b)


def _scaled_values(instance: Instance, transfers) -> list[list[int]]:
    """``vals[i][j]``: scaled value of j's bundle to i (``vals[i][i]`` is own utility)."""
    ext = instance.extension
    scale = ext.scale
    gain = int(ext.beta * scale)
    loss = scale - int(ext.alpha * scale)
    n = instance.n
    vals = [[scale * v for v in row] for row in instance.bundle_value]
    for d, q, r in transfers:
        for i in range(n):
            u = instance.utilities[i][r]
            vals[i][q] += gain * u
            vals[i][d] -= loss * u
    return vals


def _envy_count(instance: Instance, vals: list[list[int]]) -> int:
    count = 0
    for i in range(instance.n):
        own = vals[i][i]
        if any(own < vals[i][j] for j in instance.out_neighbors[i]):
            count += 1
    return count


def min_envy_bruteforce(instance: Instance, b: int = 1, *, node_cap: int | None = None) -> tuple[int, Sharing]:
    """Smallest number of envious agents over all sharings, with the first optimal sharing."""
    best = None
    witness: list[tuple[int, int, int]] = []
    for transfers in _transfers(instance, b, node_cap):
        count = _envy_count(instance, _scaled_values(instance, transfers))
        if best is None or count < best:
            best, witness = count, list(transfers)
            if best == 0:
                break
    return best, Sharing.from_transfers(witness, bound=b)


class WelfareOptimum(NamedTuple):
    utilitarian: Fraction
    egalitarian: Fraction
    utilitarian_witness: Sharing
    egalitarian_witness: Sharing


def max_welfare_bruteforce(instance: Instance, b: int = 1, *, node_cap: int | None = None) -> WelfareOptimum:
    """Largest utilitarian and egalitarian welfare over all sharings."""
    best_u = best_e = None
    wit_u: list = []
    wit_e: list = []
    for transfers in _transfers(instance, b, node_cap):
        vals = _scaled_values(instance, transfers)
        own = [vals[i][i] for i in range(instance.n)]
        uw, ew = sum(own), min(own)
        if best_u is None or uw > best_u:
            best_u, wit_u = uw, list(transfers)
        if best_e is None or ew > best_e:
            best_e, wit_e = ew, list(transfers)
    scale = instance.extension.scale
    return WelfareOptimum(
        Fraction(best_u, scale),
        Fraction(best_e, scale),
        Sharing.from_transfers(wit_u, bound=b),
        Sharing.from_transfers(wit_e, bound=b),
    )
