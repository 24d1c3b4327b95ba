"""
Greedy extension by perfect matchings
=====================================

Grow a factor one part at a time: row j of the current partial factor may
take vertex v of the next part when v has no neighbour in the row. Any
perfect matching of that bipartite graph extends the factor. With
n >= 2k - 2 a perfect matching always exists.
"""

import numpy as np

from indtrans import brute_force_factor, greedy_hall_factor, random_knd1
from indtrans.algorithms import build_auxiliary
from indtrans.constructions import greedy_trap_instance, latin_greedy_trap
from indtrans.core import is_factor

rng = np.random.default_rng(3)
for k in (4, 8, 16):
    n = 2 * k - 2
    wins = sum(greedy_hall_factor(random_knd1(k, n, rng)).success for _ in range(50))
    print(f"k={k:2d} n={n:2d}: {wins}/50 greedy successes")

# %%
# One vertex fewer and greedy can get stuck. A Latin square of order k - 1
# produces a last stage in which k - 1 vertices see only k - 2 rows.
k = 5
B, V = latin_greedy_trap(k)
print(f"trap for k={k}: V* = {V}, N(V*) = {B.neighborhood(list(V)).tolist()}")
print(B.adj.astype(int))

# %%
# The same trap embedded in a whole graph, with greedy pinned to the
# diagonal start factor. The Hall witness names the blocking set.
g, start = greedy_trap_instance(k)
assert build_auxiliary(g, start) == B
res = greedy_hall_factor(g, start=start)
print("greedy from the pinned start:", res.success, "witness:", res.witness)

# the graph itself does have a factor; greedy just picked badly
F = brute_force_factor(g, max_n=7)
print("exhaustive search:", F.tolist(), is_factor(g, F))
