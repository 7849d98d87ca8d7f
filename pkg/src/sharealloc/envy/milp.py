"""Envy minimization as a 0/1 integer program, solved by HiGHS through scipy.

An extra exact engine for instances too large for the combinatorial searches
but with few owned resources (the hardness gadgets, mostly). The solver's
answer is re-checked in exact arithmetic before it is returned.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .._values import ScaledValues
from ..model import Instance, Sharing, envious_agents

__all__ = ["solve_ersa_milp"]


def solve_ersa_milp(instance: Instance, k: int | None = None):
    """Minimum number of envious agents over simple 2-sharings.

    Variables: one binary per (donor, recipient, resource) along a sharing edge
    and one binary per agent marking it as allowed to be envious. Each agent is
    in at most one share; for every attention arc ``i -> j`` the scaled inequality
    ``own_i - value_i(j) + M * e_i >= 0`` holds. Returns
    ``(answer, minimum, witness)``; ``answer`` is ``None`` without ``k``.
    """
    if k is not None and k < 0:
        raise ValueError("k must be non-negative")
    n = instance.n
    if n == 0:
        return (True if k is not None else None), 0, Sharing()
    sv = ScaledValues(instance)
    u = instance.utilities
    ext = instance.extension
    skip_useless = ext.alpha == 1
    shares: list[tuple[int, int, int]] = []
    for i, j in instance.sorted_edges:
        for d, q in ((i, j), (j, i)):
            for r in instance.owned[d]:
                if skip_useless and (sv.gain == 0 or u[q][r] == 0):
                    continue
                shares.append((d, q, r))
    nx_ = len(shares)
    nvar = nx_ + n
    rows: list[np.ndarray] = []
    lo: list[float] = []
    hi: list[float] = []

    touching: list[list[int]] = [[] for _ in range(n)]
    for idx, (d, q, _) in enumerate(shares):
        touching[d].append(idx)
        touching[q].append(idx)
    for a in range(n):
        if len(touching[a]) > 1:
            row = np.zeros(nvar)
            row[touching[a]] = 1
            rows.append(row)
            lo.append(-np.inf)
            hi.append(1)
    if ext.budget is not None and shares:
        row = np.zeros(nvar)
        for idx, (d, q, _) in enumerate(shares):
            row[idx] = ext.cost(d, q)
        rows.append(row)
        lo.append(-np.inf)
        hi.append(ext.budget)

    max_gain = [[0] * n for _ in range(n)]  # viewer, holder: largest possible increase
    max_loss = [[0] * n for _ in range(n)]
    for d, q, r in shares:
        for i in range(n):
            max_gain[i][q] = max(max_gain[i][q], sv.gain * u[i][r])
            max_loss[i][d] = max(max_loss[i][d], sv.loss * u[i][r])
    for i, j in sorted(instance.attention_arcs):
        row = np.zeros(nvar)
        for idx, (d, q, r) in enumerate(shares):
            coef = 0
            if q == i:
                coef += sv.gain * u[i][r]
            if d == i:
                coef -= sv.loss * u[i][r]
            if q == j:
                coef -= sv.gain * u[i][r]
            if d == j:
                coef += sv.loss * u[i][r]
            row[idx] = coef
        slack = sv.base[i][i] - sv.base[i][j]
        big = max(0, -slack + max_loss[i][i] + max_gain[i][j])
        if big == 0:
            continue  # never envious of j
        row[nx_ + i] = big
        rows.append(row)
        lo.append(-slack)
        hi.append(np.inf)

    c = np.concatenate([np.zeros(nx_), np.ones(n)])
    constraints = [LinearConstraint(np.array(rows), lo, hi)] if rows else []
    res = milp(
        c,
        constraints=constraints,
        integrality=np.ones(nvar),
        bounds=Bounds(0, 1),
        options={"mip_rel_gap": 0},
    )
    if not res.success:
        raise RuntimeError(f"MILP solver failed: {res.message}")
    picked = [shares[idx] for idx in range(nx_) if res.x[idx] > 0.5]
    witness = Sharing.from_transfers(picked)
    minimum = len(envious_agents(instance, witness).envious)
    if minimum != round(res.fun):
        raise RuntimeError("MILP solution does not match its exact re-evaluation")
    return (None if k is None else minimum <= k), minimum, witness
