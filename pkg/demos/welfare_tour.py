"""Two neighbours, two resources: what sharing does to welfare.

Run: python demos/welfare_tour.py
"""

from fractions import Fraction

from sharealloc import Instance, Sharing, welfare
from sharealloc.oracle import enumerate_sharings, max_welfare_bruteforce
from sharealloc.welfare_solvers import maximize_ewsa_simple, solve_uwsa

# agent 0 holds r0 and likes r1 more; agent 1 holds r1 and likes r0 more
inst = Instance.build([[1, 4], [3, 1]], [[0], [1]], [(0, 1)], [])

print("all simple sharings:")
for s in enumerate_sharings(inst):
    uw, ew = welfare(inst, s)
    print(f"  {str(s.transfers(inst) or 'nothing shared'):<20}  utilitarian {uw}  egalitarian {ew}")

res = solve_uwsa(inst, 1, 0)
print("best utilitarian via matching:", res.optimum, res.witness.transfers(inst))
value, wit = maximize_ewsa_simple(inst)
print("best egalitarian via bipartite matching:", value, wit.transfers(inst))

# losses: the donor keeps half, the receiver gets half
lossy = inst.with_extension(alpha=Fraction(1, 2), beta=Fraction(1, 2))
print(f"with alpha = beta = 1/2: {solve_uwsa(lossy, 1, 0).optimum} (oracle {max_welfare_bruteforce(lossy).utilitarian})")
uw, ew = welfare(inst, Sharing())
print(f"empty sharing: utilitarian {uw}, egalitarian {ew}")
