"""Hardness gadgets: build one from a source instance and check both sides agree.

Run: python demos/gadgets.py
"""

import networkx as nx

from sharealloc import envious_agents, welfare
from sharealloc.envy import solve_ersa_milp, solve_ersa_treewidth
from sharealloc.reductions import (
    gen_3sat_ersa,
    gen_clique_ersa,
    gen_independent_set_ersa,
    gen_n3dm_ewsa,
    has_clique,
    max_independent_set_size,
    n3dm_bruteforce,
    n3dm_witness,
    sat_bruteforce,
    sat_witness,
)
from sharealloc.welfare_solvers import solve_ewsa_bounded_exact

g = nx.cycle_graph(5)
for ell in (2, 3):
    inst, k = gen_independent_set_ersa(g, ell)
    print(f"C5 independent set of size {ell}: source {max_independent_set_size(g) >= ell}, "
          f"gadget ({inst.n} agents, k={k}) {solve_ersa_milp(inst, k)[0]}")

clauses = [(1, 2, -3), (-1, 3), (-2,)]
inst, k = gen_3sat_ersa(clauses)
assignment = sat_bruteforce(clauses)
w = sat_witness(clauses, assignment, 3)
print(f"3SAT {clauses}: satisfiable by {assignment}; witness leaves {len(envious_agents(inst, w))} envious, "
      f"DP says {solve_ersa_treewidth(inst, None, k)[0]}")

wheel = nx.wheel_graph(6)
inst, k = gen_clique_ersa(wheel, 4)
print(f"wheel W5 has a 4-clique: {has_clique(wheel, 4) is not None}; gadget answer {solve_ersa_milp(inst, k)[0]}")

X, Y, Z, T = [1, 2], [2, 1], [3, 3], 6
inst, b, k = gen_n3dm_ewsa(X, Y, Z, T)
triples = n3dm_bruteforce(X, Y, Z, T)
print(f"N3DM triples {triples}; witness egalitarian welfare {welfare(inst, n3dm_witness(X, Y, Z, T, triples))[1]} "
      f"(k={k}); search says {solve_ewsa_bounded_exact(inst, b, k)[0]}")
