"""
Graphs with no factor
=====================

Three small constructions where every attempt to split the vertices into
disjoint independent transversals must fail, checked by exhaustive search.
"""

import itertools

from indtrans import brute_force_factor, catlin, first_column_clique
from indtrans.core import is_independent_transversal

# %%
# The first-column clique: vertex 0 of every part is joined to vertex 0 of
# every other part, and parts have only k - 1 vertices. Each transversal can
# use at most one of the k zero vertices, yet there are only k - 1 rows.
for k in (3, 4, 5):
    g = first_column_clique(k)
    print(f"clique k={k}: [{g.k},{g.n},1], factor found: {brute_force_factor(g) is not None}")

g = first_column_clique(3)
indep = [T for T in itertools.product(range(g.n), repeat=g.k) if is_independent_transversal(g, T)]
print("independent transversals of clique(3):", indep)

# %%
# Catlin's graph for odd k: identity matchings everywhere except that the
# last two indices are crossed. n = k still is not enough.
for k in (3, 5):
    print(f"catlin k={k}: factor found: {brute_force_factor(catlin(k)) is not None}")

# %%
# Even k is a negative control: the parity argument breaks and a factor exists.
import warnings

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    F = brute_force_factor(catlin(4))
print("catlin k=4 factor rows:", F.tolist())
