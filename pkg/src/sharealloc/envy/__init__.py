"""Exact algorithms for reducing the number of envious agents."""

from .auto import solve_ersa_auto
from .bounded import solve_ersa_bounded_shared
from .clique import solve_ersa_identical_clique
from .fpt import (
    PossibleResourceSets,
    SharingConfiguration,
    feasible_realization_exists,
    min_envy_fpt,
    solve_ersa_fpt_agents,
)
from .milp import solve_ersa_milp
from .treewidth import (
    InvalidDecompositionError,
    NiceTreeDecomposition,
    TreeNode,
    build_nice_decomposition,
    solve_ersa_treewidth,
)

__all__ = [
    "solve_ersa_auto",
    "solve_ersa_bounded_shared",
    "solve_ersa_identical_clique",
    "PossibleResourceSets",
    "SharingConfiguration",
    "feasible_realization_exists",
    "min_envy_fpt",
    "solve_ersa_fpt_agents",
    "solve_ersa_milp",
    "InvalidDecompositionError",
    "NiceTreeDecomposition",
    "TreeNode",
    "build_nice_decomposition",
    "solve_ersa_treewidth",
]
