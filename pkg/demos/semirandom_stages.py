"""
Semi-random reshuffling, stage by stage
=======================================

Below n = 2k - 2 the greedy choice of matching matters. The semi-random
solver picks a random pairing of the auxiliary graph, keeps most of its
edges, and re-matches only a small leftover. This demo watches the
per-stage reports and how the goodness tolerance delta drives success.
"""

import math

import numpy as np

from indtrans import SolverParams, random_knd1, semirandom_factor

n = 200
g = random_knd1(n // 2, n, 7)

# %%
# Default constants: delta * n = 4 while m_t wanders by about sqrt(t), so
# later stages are often "not good" and the attempt is abandoned.
res = semirandom_factor(g, SolverParams(seed=7, restarts=0, complete_failed_attempts=True))
good = [r.good for r in res.reports]
print(f"defaults: {sum(good)}/{len(good)} stages good, success={res.success}")
print("first non-good stage:", next((r for r in res.reports if not r.good), None))

# %%
# Loosening delta to 0.09 keeps almost every stage good at this size.
res = semirandom_factor(g, SolverParams(delta=0.09, seed=7))
print(f"delta=0.09: success={res.success} after {res.attempts} attempt(s)")
dev = np.array([r.m_t - (n - r.t) for r in res.reports])
print("m_t - (n - t) per stage, min/median/max:", dev.min(), int(np.median(dev)), dev.max())

# %%
# Past k = n / (1 + c) the retained count floor(c t + eta n) exceeds the
# pairing size late in the run; clamping it is an opt-in deviation.
g = random_knd1(math.ceil(0.56 * n), n, 8)
for clamp in (False, True):
    res = semirandom_factor(g, SolverParams(delta=0.09, clamp_retained=clamp, seed=8, restarts=3))
    print(f"k/n=0.56 clamp={clamp}: success={res.success}")
