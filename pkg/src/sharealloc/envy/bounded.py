"""Exhaustive envy reduction over sharings that share only a few resources."""

from __future__ import annotations

from .._limits import NodeCounter, node_cap as _node_cap
from .._values import ScaledValues
from ..model import Instance, Sharing

__all__ = ["solve_ersa_bounded_shared"]


def solve_ersa_bounded_shared(
    instance: Instance, k: int, s_max: int, *, node_cap: int | None = None
) -> tuple[bool, Sharing | None]:
    """Is there a simple 2-sharing with at most ``s_max`` shared resources and at
    most ``k`` envious agents?

    Picks the shared resources and their receivers by depth-first search over the
    resources in index order. Raises ``SearchBudgetExceeded`` past the node cap.
    """
    if s_max < 0:
        raise ValueError("s_max must be non-negative")
    if k < 0:
        raise ValueError("k must be non-negative")
    sv = ScaledValues(instance)
    n, m = instance.n, instance.m
    u = instance.utilities
    ext = instance.extension
    counter = NodeCounter(_node_cap(node_cap), "bounded-shared search")
    vals = [row[:] for row in sv.base]
    busy = [False] * n
    chosen: list[tuple[int, int, int]] = []

    def envy() -> int:
        return sum(
            1 for i in range(n) if any(vals[i][i] < vals[i][j] for j in instance.out_neighbors[i])
        )

    def apply(d: int, q: int, r: int, sign: int) -> None:
        for i in range(n):
            vals[i][q] += sign * sv.gain * u[i][r]
            vals[i][d] -= sign * sv.loss * u[i][r]

    def rec(r: int, spent: int) -> bool:
        counter.tick()
        if envy() <= k:
            return True
        if r == m or len(chosen) == s_max:
            return False
        if rec(r + 1, spent):
            return True
        d = instance.owner[r]
        if busy[d]:
            return False
        for q in instance.neighbors[d]:
            if busy[q]:
                continue
            c = ext.cost(d, q)
            if ext.budget is not None and spent + c > ext.budget:
                continue
            busy[d] = busy[q] = True
            apply(d, q, r, 1)
            chosen.append((d, q, r))
            if rec(r + 1, spent + c):
                return True
            chosen.pop()
            apply(d, q, r, -1)
            busy[d] = busy[q] = False
        return False

    if rec(0, 0):
        return True, Sharing.from_transfers(chosen)
    return False, None
