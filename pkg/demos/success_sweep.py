"""
Success rate against k/n
========================

A small sweep through the CLI's harness. Rates are empirical and depend on
the constants; the asymptotic regime needs n far beyond desk scale.
"""

from indtrans.cli import parse_params, sweep_rows

params = parse_params("delta=0.09,restarts=3", seed=1)
rows = sweep_rows("semirandom", [0.40, 0.50, 0.5624], [100, 200], trials=5, seed=1, params=params)
print(f"{'k/n':>7} {'n':>5} {'k':>5}  success")
for r in rows:
    print(f"{r['ratio']:>7} {r['n']:>5} {r['k']:>5}  {r['successes']}/{r['trials']}")

# greedy is guaranteed while n >= 2k - 2, which k/n <= 0.5 satisfies
rows = sweep_rows("greedy", [0.45, 0.5], [60], trials=10, seed=1, params=params)
for r in rows:
    print("greedy", r["ratio"], r["success_rate"])
