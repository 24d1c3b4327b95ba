"""Factor-finding algorithms: greedy Hall extension and the staged semi-random solver.

Both build the factor one part at a time. With a t-partial factor F_t in hand,
the auxiliary bipartite graph B_t joins row j of F_t to vertex v of part t
when v has no neighbour in row j; a perfect matching of B_t extends F_t.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import analysis
from .core import (
    NO_NEIGHBOR,
    InvariantViolation,
    PartialFactor,
    SparsePartiteGraph,
    conflicting_rows,
    is_factor,
)
from .matching import (
    BipartiteAdjacency,
    HallWitness,
    InsufficientMatching,
    PairAssignment,
    as_adjacency,
    perfect_matching_or_witness,
    random_pairing,
    reshuffle,
    trim_to_exact_degree,
)

__all__ = [
    "SolverParams",
    "StageReport",
    "GreedyResult",
    "SemiRandomResult",
    "ExactModeTooLarge",
    "build_auxiliary",
    "greedy_hall_factor",
    "semirandom_stage",
    "semirandom_factor",
    "retained_pairs",
    "check_success_condition",
]

EXACT_MODE_MAX_N = 20


class ExactModeTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SolverParams:
    """Constants of the semi-random solver.

    ``c`` is the reshuffle slope, ``delta`` the goodness tolerance and ``eta``
    the reshuffle slack, both as fractions of n. ``epsilon`` is the headroom in
    the intended regime ``k <= n (1 - epsilon) / (1 + c)``.

    ``complete_failed_attempts`` keeps running stages (with the fallback
    extension) after the first unsuccessful one instead of abandoning the
    attempt. ``clamp_retained`` caps the retained-pair count at the number of
    available pairs instead of treating the shortfall as a failed stage.
    ``greedy_shortcut`` hands the instance to greedy when ``n >= 2k - 2``.
    """

    c: float = 0.778
    delta: float = 0.02
    eta: float = 0.10
    epsilon: float = 0.05
    restarts: int = 20
    seed: int = 0
    complete_failed_attempts: bool = False
    clamp_retained: bool = False
    greedy_shortcut: bool = False

    def __post_init__(self):
        if not 0 < self.c <= 1:
            raise ValueError(f"c must lie in (0, 1], got {self.c}")
        if not analysis.check_c_condition(self.c):
            raise ValueError(f"c={self.c} violates 2c^2 ln((1+c)/c) >= 1")
        if not 0 < self.delta < self.eta:
            raise ValueError(f"need 0 < delta < eta, got delta={self.delta}, eta={self.eta}")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.restarts < 0:
            raise ValueError("restarts must be non-negative")

    def max_parts(self, n: int) -> int:
        """``floor(n (1 - epsilon) / (c + 1))``."""
        return math.floor(n * (1 - self.epsilon) / (self.c + 1))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class StageReport:
    t: int
    m_t: int
    good: bool
    s_t: int
    reshuffle_attempted: bool
    reshuffle_success: bool
    fallback_used: bool

    def __post_init__(self):
        if self.fallback_used != (not (self.good and self.reshuffle_success)):
            raise InvariantViolation(f"inconsistent stage report {self}")

    @property
    def successful(self) -> bool:
        return not self.fallback_used


@dataclass
class GreedyResult:
    factor: PartialFactor | None
    failed_stage: int | None = None
    witness: HallWitness | None = None

    @property
    def success(self) -> bool:
        return self.factor is not None


@dataclass
class SemiRandomResult:
    factor: PartialFactor | None
    reports: list[StageReport]
    attempts: int
    params: SolverParams
    attempt_reports: list[list[StageReport]] = field(default_factory=list, repr=False)
    used_greedy: bool = False

    @property
    def success(self) -> bool:
        return self.factor is not None


def build_auxiliary(g: SparsePartiteGraph, F: PartialFactor) -> BipartiteAdjacency:
    """Auxiliary graph between the rows of F and part ``F.t``.

    Asserts the minimum-degree bound ``n - t`` on both sides.
    """
    t, n = F.t, g.n
    if F.n != n:
        raise ValueError(f"factor has {F.n} rows, graph parts have {n} vertices")
    if t >= g.k:
        raise ValueError(f"factor already covers all {g.k} parts")
    adj = np.ones((n, n), dtype=bool)
    rows = np.arange(n)
    for l in range(t):
        hit = g.nbr[l, t, F.rows[:, l]]
        has = hit != NO_NEIGHBOR
        adj[rows[has], hit[has]] = False
    bound = n - t
    if adj.sum(axis=1).min() < bound or adj.sum(axis=0).min() < bound:
        raise InvariantViolation(f"auxiliary graph at t={t} has a degree below {bound}")
    return BipartiteAdjacency(adj)


def greedy_hall_factor(g: SparsePartiteGraph, start: PartialFactor | None = None) -> GreedyResult:
    """Extend by an arbitrary perfect matching of each auxiliary graph in turn.

    Always succeeds when ``n >= 2k - 2``. On failure the result carries the
    stage (number of covered parts) and the Hall witness that blocked it.
    ``start`` pins the initial partial factor (default: the trivial one).
    """
    F = start if start is not None else PartialFactor.trivial(g.n)
    if start is not None and conflicting_rows(g, F).any():
        raise ValueError("start factor has a non-independent row")
    while F.t < g.k:
        outcome = perfect_matching_or_witness(build_auxiliary(g, F))
        if isinstance(outcome, HallWitness):
            return GreedyResult(None, failed_stage=F.t, witness=outcome)
        F = F.extend(outcome.pairs)
    if not is_factor(g, F):
        raise InvariantViolation("greedy produced an invalid factor")
    return GreedyResult(F)


def retained_pairs(t: int, n: int, c: float, eta: float) -> int:
    """``floor(c t + eta n)``."""
    return math.floor(c * t + eta * n)


def semirandom_stage(g: SparsePartiteGraph, F: PartialFactor, params: SolverParams,
                     rng: np.random.Generator, *, strict: bool = True,
                     lemma_checks: bool = False) -> tuple[PartialFactor, StageReport]:
    """One stage: trim, random pairing, goodness test, reshuffle, extend.

    An unsuccessful stage extends each row by its random partner, which can
    leave rows non-independent. When the pairing is good but has fewer than
    s_t edges, ``strict`` raises InsufficientMatching; otherwise the stage
    counts as unsuccessful (or s_t is capped if ``params.clamp_retained``).

    ``lemma_checks`` additionally verifies the neighbourhood sufficient
    condition by exhaustive enumeration (small n only).
    """
    n, t = g.n, F.t
    B = build_auxiliary(g, F)
    B_trim = trim_to_exact_degree(B, max(n - t, 0), rng)
    M = random_pairing(B_trim, rng)
    m_t = M.size
    good = abs(m_t - (n - t)) <= params.delta * n
    s_t = retained_pairs(t, n, params.c, params.eta)

    attempted = success = False
    new_column = M.pairs
    if good:
        s_eff = s_t
        if s_t > m_t:
            if params.clamp_retained:
                s_eff = m_t
            elif strict:
                raise InsufficientMatching(
                    f"stage t={t}: m_t={m_t} < s_t={s_t}; k is outside the valid regime for n={n}")
            else:
                s_eff = None
        if s_eff is not None:
            attempted = True
            out = reshuffle(B, M, s_eff, rng)
            success = out.success
            if success:
                new_column = out.final_matching.pairs
            _assert_min_degree_guarantee(t, n, m_t, s_eff, success)
            if lemma_checks:
                _assert_neighbourhood_guarantee(B, t, n, m_t, s_eff, params, success)

    report = StageReport(t=t, m_t=m_t, good=good, s_t=s_t, reshuffle_attempted=attempted,
                         reshuffle_success=success, fallback_used=not (good and success))
    # every new vertex must avoid its row, so independent rows stay independent
    if success and not B.adj[np.arange(n), new_column].all():
        raise InvariantViolation(f"successful stage t={t} broke row independence")
    return F.extend(new_column), report


def _assert_min_degree_guarantee(t: int, n: int, m_t: int, s: int, success: bool) -> None:
    # Leftover graph has x = n - m_t + s vertices per side and minimum degree
    # >= x - t; once t <= x/2 it must have a perfect matching. This covers
    # every stage with t <= eta n / 3 and a good pairing.
    x = n - m_t + s
    if 2 * t <= x and not success:
        raise InvariantViolation(
            f"stage t={t}: leftover graph of size {x} with min degree >= {x - t} had no perfect matching")


def _assert_neighbourhood_guarantee(B: BipartiteAdjacency, t: int, n: int, m_t: int, s: int,
                                    params: SolverParams, success: bool) -> None:
    w = math.floor(params.c * t)
    threshold = n - math.floor(params.eta * n / 7)
    # The sufficient condition only applies when its arithmetic premises hold
    # for the realised m_t and s.
    if w < 1 or t + m_t - s > threshold or n - m_t + s - t < w:
        return
    if n > EXACT_MODE_MAX_N:
        return
    if check_success_condition(B, w, threshold) and not success:
        raise InvariantViolation(f"stage t={t}: neighbourhood condition held but reshuffle failed")


def semirandom_factor(g: SparsePartiteGraph, params: SolverParams | None = None,
                      *, lemma_checks: bool = False) -> SemiRandomResult:
    """Run stages 1..k-1 from the trivial partial factor, restarting on failure.

    Attempt i draws from the i-th child of ``SeedSequence(params.seed)``; at
    most ``params.restarts + 1`` attempts are made. A returned factor has
    passed :func:`is_factor`.
    """
    params = params or SolverParams()
    if params.greedy_shortcut and g.n >= 2 * g.k - 2:
        res = greedy_hall_factor(g)
        return SemiRandomResult(res.factor, [], 0, params, used_greedy=True)

    streams = np.random.SeedSequence(params.seed).spawn(params.restarts + 1)
    history: list[list[StageReport]] = []
    for attempt, stream in enumerate(streams, start=1):
        rng = np.random.default_rng(stream)
        F = PartialFactor.trivial(g.n)
        reports: list[StageReport] = []
        while F.t < g.k:
            F, rep = semirandom_stage(g, F, params, rng, strict=False, lemma_checks=lemma_checks)
            reports.append(rep)
            if rep.fallback_used and not params.complete_failed_attempts:
                break
        history.append(reports)
        if F.t == g.k and all(r.successful for r in reports):
            if not is_factor(g, F):
                raise InvariantViolation("all stages succeeded but the factor is invalid")
            return SemiRandomResult(F, reports, attempt, params, history)
    return SemiRandomResult(None, history[-1], len(streams), params, history)


def check_success_condition(B, w_size: int, threshold: int, *, mode: str = "exact",
                            samples: int = 4096, rng=None) -> bool:
    """Whether every right set W of size ``w_size`` has ``|N(W)| >= threshold``.

    ``mode="exact"`` enumerates all W (n <= 20); ``mode="sampled"`` tests
    ``samples`` uniformly random W and can only miss violations.
    """
    B = as_adjacency(B)
    m = B.m
    if not 0 <= w_size <= m:
        raise ValueError(f"w_size {w_size} out of range [0, {m}]")
    if w_size == 0:
        return threshold <= 0
    if mode == "exact":
        if m > EXACT_MODE_MAX_N:
            raise ExactModeTooLarge(f"exact enumeration capped at n={EXACT_MODE_MAX_N}, got {m}")
        cols = [int(sum(1 << int(u) for u in np.flatnonzero(B.adj[:, v]))) for v in range(m)]
        for W in itertools.combinations(range(m), w_size):
            mask = 0
            for v in W:
                mask |= cols[v]
            if mask.bit_count() < threshold:
                return False
        return True
    if mode == "sampled":
        rng = np.random.default_rng(rng)
        adj_t = B.adj.T
        for _ in range(samples):
            W = rng.choice(m, size=w_size, replace=False)
            if np.count_nonzero(adj_t[W].any(axis=0)) < threshold:
                return False
        return True
    raise ValueError(f"unknown mode {mode!r}")
