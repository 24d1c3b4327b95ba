"""
Where does c = 0.778 come from?
===============================

The reshuffle step needs the integral of
1 - (1 - c mu - x)(1 - c x / (1 - x)) over [0, mu] to stay below c mu for
every mu up to 1/(1+c). That reduces to 2 c^2 ln((1+c)/c) >= 1.
"""

import numpy as np

from indtrans.analysis import (
    c_condition_value,
    integral_closed_form,
    integral_numeric,
    min_feasible_c,
    verify_f_nonpositive,
)

for c in (0.5, 0.7, 0.778, 1.0):
    print(f"c={c:<5}  2c^2 ln((1+c)/c) = {c_condition_value(c):.4f}")

lo, hi = min_feasible_c(1e-12)
print(f"smallest admissible c ~ {hi:.10f}, so k/n up to {1 / (1 + hi):.5f}")

# %%
# closed form against Simpson's rule
c = 0.778
for mu in np.linspace(0.1, 1 / (1 + c), 4):
    print(f"mu={mu:.4f}  closed={integral_closed_form(c, mu):.12f}  simpson={integral_numeric(c, mu):.12f}  c*mu={c * mu:.4f}")

rep = verify_f_nonpositive(c)
print(f"max of the slack on the grid: {rep.max_value:.3e} at mu={rep.argmax_mu:.4f}; "
      f"margin away from the endpoint: {rep.margin:.4f}")
