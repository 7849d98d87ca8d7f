"""Pick an exact envy-reduction engine from the instance's structure."""

from __future__ import annotations

from .._limits import SearchBudgetExceeded, node_cap as _node_cap
from ..model import Instance, Sharing
from .bounded import solve_ersa_bounded_shared
from .clique import solve_ersa_identical_clique
from .fpt import solve_ersa_fpt_agents
from .treewidth import build_nice_decomposition, solve_ersa_treewidth

__all__ = ["solve_ersa_auto", "SMALL_N", "SMALL_M", "SMALL_WIDTH"]

SMALL_N = 8
SMALL_M = 12
SMALL_WIDTH = 3


def solve_ersa_auto(
    instance: Instance, k: int, *, node_cap: int | None = None
) -> tuple[bool, Sharing | None, str]:
    """Decide whether some simple 2-sharing leaves at most ``k`` agents envious.

    Tried in order: the identical-utility clique algorithm, the tree-decomposition
    DP (attention matching the sharing graph and width at most ``SMALL_WIDTH``),
    the agent-count FPT search for ``n <= SMALL_N``, the bounded-shared search
    for ``m <= SMALL_M``, and finally the FPT search if its estimate fits the
    node cap. Returns ``(answer, witness, algorithm)``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    ext = instance.extension
    if (
        instance.identical_utilities
        and instance.attention_is_bidirectional_clique
        and (ext.alpha == 1 or ext.budget is None)
    ):
        ok, _, wit = solve_ersa_identical_clique(instance, k)
        return ok, wit if ok else None, "identical-clique"
    if instance.attention_matches_sharing:
        dec = build_nice_decomposition(instance.n, instance.sorted_edges, node_cap=node_cap)
        if dec.width <= SMALL_WIDTH:
            ok, _, wit = solve_ersa_treewidth(instance, dec, k)
            return ok, wit if ok else None, "treewidth"
    n = instance.n
    if n <= SMALL_N:
        ok, wit = solve_ersa_fpt_agents(instance, k, node_cap=node_cap)
        return ok, wit, "fpt-agents"
    if instance.m <= SMALL_M:
        ok, wit = solve_ersa_bounded_shared(instance, k, n // 2, node_cap=node_cap)
        return ok, wit, "bounded-shared"
    cap = _node_cap(node_cap)
    if (2 * n) ** n > cap:
        raise SearchBudgetExceeded(
            f"no polynomial engine applies and the agent search needs about {(2 * n) ** n} steps (cap {cap})"
        )
    ok, wit = solve_ersa_fpt_agents(instance, k, node_cap=node_cap)
    return ok, wit, "fpt-agents"
