"""Numerics behind the choice of the reshuffle slope c.

The integral in question is

    I(c, mu) = int_0^mu [1 - (1 - c*mu - x) * (1 - c*x / (1 - x))] dx

and the slope is admissible when ``2 c^2 ln((1 + c) / c) >= 1``, which makes
``I(c, mu) <= c * mu`` for every ``0 <= mu <= 1 / (1 + c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "IntegralParams",
    "integrand",
    "integral_closed_form",
    "integral_numeric",
    "c_condition_value",
    "check_c_condition",
    "min_feasible_c",
    "slack_function",
    "slack_derivative",
    "FReport",
    "verify_f_nonpositive",
]


@dataclass(frozen=True)
class IntegralParams:
    c: float
    mu: float
    steps: int = 1_000_000

    def __post_init__(self):
        if not 0 < self.c <= 1:
            raise ValueError(f"c must lie in (0, 1], got {self.c}")
        if not 0 <= self.mu < 1:
            raise ValueError(f"mu must lie in [0, 1), got {self.mu}")
        if self.steps < 2:
            raise ValueError("need at least 2 quadrature steps")


def _check_mu(mu: float) -> None:
    if not 0 <= mu < 1:
        raise ValueError(f"mu must lie in [0, 1), got {mu}")


def integrand(x, c: float, mu: float):
    x = np.asarray(x, dtype=float)
    return 1.0 - (1.0 - c * mu - x) * (1.0 - c * x / (1.0 - x))


def integral_closed_form(c: float, mu: float) -> float:
    _check_mu(mu)
    return mu * mu * (c * c + 1.5 * c + 0.5) + mu * c * c * math.log1p(-mu)


def integral_numeric(c: float, mu: float, steps: int = 1_000_000) -> float:
    """Composite Simpson rule on ``steps`` subintervals (rounded up to even)."""
    _check_mu(mu)
    if steps < 2:
        raise ValueError("need at least 2 quadrature steps")
    if mu == 0:
        return 0.0
    steps += steps % 2
    x = np.linspace(0.0, mu, steps + 1)
    y = integrand(x, c, mu)
    h = mu / steps
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def c_condition_value(c: float) -> float:
    return 2.0 * c * c * math.log((1.0 + c) / c)


def check_c_condition(c: float) -> bool:
    """``2 c^2 ln((1+c)/c) >= 1``."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    return c_condition_value(c) >= 1.0


def min_feasible_c(tolerance: float = 1e-9, lo: float = 0.5, hi: float = 1.0) -> tuple[float, float]:
    """Bisection bracket ``(lo, hi)`` of width <= tolerance around the smallest admissible c.

    The condition is false at ``lo`` and true at ``hi`` on return.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if check_c_condition(lo) or not check_c_condition(hi):
        raise ValueError(f"[{lo}, {hi}] does not bracket the boundary")
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if check_c_condition(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def slack_function(mu, c: float):
    """``I(c, mu) / mu - c`` written out; non-positive exactly where the bound holds."""
    mu = np.asarray(mu, dtype=float)
    return mu * (c * c + 1.5 * c + 0.5) + c * c * np.log1p(-mu) - c


def slack_derivative(mu, c: float):
    mu = np.asarray(mu, dtype=float)
    return c * c + 1.5 * c + 0.5 - c * c / (1.0 - mu)


@dataclass(frozen=True)
class FReport:
    c: float
    grid_points: int
    mu_max: float
    max_value: float
    argmax_mu: float
    value_at_zero: float
    increasing_threshold: float
    strictly_increasing: bool
    derivative_positive: bool
    epsilon: float
    margin: float

    @property
    def passed(self) -> bool:
        return self.max_value <= 1e-12 and self.strictly_increasing


def verify_f_nonpositive(c: float, grid_step: float = 1e-4, epsilon: float = 0.05) -> FReport:
    """Evaluate the slack function on a grid over ``[0, 1/(1+c)]``.

    ``margin`` is ``min (c*mu - I(c, mu)) / mu`` over grid points with
    ``0 < mu <= (1 - epsilon)/(1 + c)``: the measured room below the bound.
    """
    if not check_c_condition(c):
        raise ValueError(f"c={c} does not satisfy 2c^2 ln((1+c)/c) >= 1")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    mu_max = 1.0 / (1.0 + c)
    count = int(math.ceil(mu_max / grid_step))
    mu = np.linspace(0.0, mu_max, count + 1)
    f = slack_function(mu, c)
    threshold = 1.0 - c * c / (c * c + 1.5 * c + 0.5)
    below = mu < threshold
    increasing = bool(np.all(np.diff(f[below]) > 0)) if below.sum() > 1 else True
    deriv_ok = bool(np.all(slack_derivative(mu[below], c) > 0))
    restricted = (mu > 0) & (mu <= (1.0 - epsilon) / (1.0 + c))
    margin = float(np.min(-f[restricted])) if restricted.any() else float("nan")
    i_max = int(np.argmax(f))
    return FReport(
        c=c,
        grid_points=mu.size,
        mu_max=mu_max,
        max_value=float(f[i_max]),
        argmax_mu=float(mu[i_max]),
        value_at_zero=float(f[0]),
        increasing_threshold=threshold,
        strictly_increasing=increasing,
        derivative_positive=deriv_ok,
        epsilon=epsilon,
        margin=margin,
    )
