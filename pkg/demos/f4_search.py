"""
Every [4,4,1]-graph has a factor
================================

Relabel so that part 0 is matched to parts 1, 2, 3 by the identity; the
other three matchings are arbitrary permutations, giving 24^3 graphs. For
each, search all 24^3 triples of permutations for the rows.
"""

import time

from indtrans import verify_f4
from indtrans.exhaustive import f4_instance, find_factor_by_permutation_triples

g = f4_instance(4321)
print("instance 4321, pair (1,2) matching:", g.nbr[1, 2].tolist())
print("a factor:", find_factor_by_permutation_triples(g).tolist())

start = time.perf_counter()
rep = verify_f4(relabel_checks=100)
print(rep.summary(), f"({time.perf_counter() - start:.1f}s)")
print("random relabelings re-checked:", rep.relabel_checked, "failures:", rep.relabel_failures)
