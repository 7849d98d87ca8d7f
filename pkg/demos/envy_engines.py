"""Minimizing the number of envious agents with every engine in the package.

Run: python demos/envy_engines.py
"""

import time

from sharealloc import Instance
from sharealloc.envy import (
    min_envy_fpt,
    solve_ersa_auto,
    solve_ersa_identical_clique,
    solve_ersa_milp,
    solve_ersa_treewidth,
)
from sharealloc.io import generate_random
from sharealloc.oracle import min_envy_bruteforce


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, (time.perf_counter() - t) * 1000


general = generate_random(seed=3, n=6, m=6, sharing_model="er:0.6", attention_model="er:0.4")
print("general instance, 6 agents")
for name, fn in [("oracle", min_envy_bruteforce), ("fpt-agents", min_envy_fpt)]:
    (best, _), ms = timed(fn, general)
    print(f"  {name:<12} min envy {best}  ({ms:.1f} ms)")
(_, best, _), ms = timed(solve_ersa_milp, general)
print(f"  {'milp':<12} min envy {best}  ({ms:.1f} ms)")

path = generate_random(seed=5, n=40, m=20, sharing_model="path", u_max=10)
(_, best, wit), ms = timed(solve_ersa_treewidth, path)
print(f"40-agent path: treewidth DP min envy {best} with {len(wit)} shares ({ms:.1f} ms)")

row = [4, 2, 2, 5, 1]
same = Instance.build([row] * 5, [[0], [1], [2], [3], [4]], "clique", "clique")
(_, best, wit), ms = timed(solve_ersa_identical_clique, same)
print(f"identical utilities on a clique: min envy {best}, shares {wit.transfers(same)} ({ms:.1f} ms)")

for k in range(2, 5):
    ok, _, used = solve_ersa_auto(general, k)
    print(f"auto, k={k}: {'yes' if ok else 'no'} via {used}")
