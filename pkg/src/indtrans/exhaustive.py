"""Exact engines for small instances.

Two independent routes to factor existence:

* the permutation-triple search over [4,4,1]-graphs, which settles every
  instance of the 24^3 family with three matchings pinned to the identity;
* a general backtracking search over column assignments.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .core import NO_NEIGHBOR, InvariantViolation, PartialFactor, SparsePartiteGraph, is_factor, relabel

__all__ = [
    "PERMUTATIONS_4",
    "F4_INSTANCE_COUNT",
    "BudgetExceeded",
    "SizeCapExceeded",
    "VerificationReport",
    "f4_instance",
    "enumerate_f4_instances",
    "find_factor_by_permutation_triples",
    "has_factor_by_permutation_triples",
    "brute_force_factor",
    "verify_f4",
    "relabel_spot_check",
]

# lexicographic order; row 0 is the identity
PERMUTATIONS_4 = np.array(list(itertools.permutations(range(4))), dtype=np.int64)
F4_INSTANCE_COUNT = len(PERMUTATIONS_4) ** 3
_IDENTITY = np.arange(4)


class SizeCapExceeded(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int, elapsed: float, parts_placed: int):
        self.nodes = nodes
        self.elapsed = elapsed
        self.parts_placed = parts_placed
        super().__init__(f"search budget exhausted after {nodes} nodes in {elapsed:.1f}s "
                         f"(deepest level: {parts_placed} parts placed)")


def f4_instance(index: int) -> SparsePartiteGraph:
    """Instance ``index`` of the enumeration, ``0 <= index < 13824``.

    Part 0 is joined to parts 1, 2, 3 by the identity; the matchings on pairs
    (1,2), (1,3), (2,3) are the permutations at the base-24 digits of index,
    most significant first.
    """
    if not 0 <= index < F4_INSTANCE_COUNT:
        raise IndexError(f"instance index {index} out of range")
    p12, rest = divmod(index, 24 * 24)
    p13, p23 = divmod(rest, 24)
    g = SparsePartiteGraph(4, 4)
    for j in (1, 2, 3):
        g.nbr[0, j] = _IDENTITY
        g.nbr[j, 0] = _IDENTITY
    for (i, j), p in zip(((1, 2), (1, 3), (2, 3)), (p12, p13, p23)):
        perm = PERMUTATIONS_4[p]
        g.nbr[i, j] = perm
        g.nbr[j, i, perm] = _IDENTITY
    return g


def enumerate_f4_instances() -> Iterator[SparsePartiteGraph]:
    for index in range(F4_INSTANCE_COUNT):
        yield f4_instance(index)


def _compat(nbr_lm: np.ndarray) -> np.ndarray:
    # ok[p, q]: ordering part l by perm p and part m by perm q puts no edge
    # inside any row
    hit = nbr_lm[PERMUTATIONS_4]
    return np.all(hit[:, None, :] != PERMUTATIONS_4[None, :, :], axis=2)


def find_factor_by_permutation_triples(g: SparsePartiteGraph) -> PartialFactor | None:
    """Search rows ``(j, pi1(j), pi2(j), pi3(j))`` over all 24^3 permutation triples.

    Part 0 is kept in identity order, which loses nothing: rows can always be
    sorted by their part-0 vertex. Returns the first factor in lexicographic
    triple order, or None.
    """
    if g.k != 4 or g.n != 4:
        raise ValueError(f"need a [4,4,1]-graph, got k={g.k}, n={g.n}")
    nbr = g.nbr
    c01, c02, c03 = (_compat(nbr[0, j])[0] for j in (1, 2, 3))
    c12 = _compat(nbr[1, 2]) & c01[:, None] & c02[None, :]
    c13 = _compat(nbr[1, 3]) & c03[None, :]
    c23 = _compat(nbr[2, 3])
    ok = c12[:, :, None] & c13[:, None, :] & c23[None, :, :]
    flat = int(np.argmax(ok))
    if not ok.flat[flat]:
        return None
    p1, p2, p3 = np.unravel_index(flat, ok.shape)
    F = PartialFactor(np.column_stack([_IDENTITY, PERMUTATIONS_4[p1], PERMUTATIONS_4[p2], PERMUTATIONS_4[p3]]))
    if not is_factor(g, F):
        raise InvariantViolation("permutation-triple search returned an invalid factor")
    return F


def has_factor_by_permutation_triples(g: SparsePartiteGraph) -> bool:
    return find_factor_by_permutation_triples(g) is not None


def brute_force_factor(g: SparsePartiteGraph, *, max_n: int = 6, max_k: int = 6,
                       time_budget: float | None = None) -> PartialFactor | None:
    """Exhaustive backtracking for a factor of independent transversals.

    Parts are placed in order of decreasing edge count. The first placed part
    fixes the row order; each later part is assigned to rows by a nested
    search over partial permutations, pruning any vertex adjacent to a vertex
    already in its row. Returns a verified factor or None when none exists.
    """
    k, n = g.k, g.n
    if n > max_n or k > max_k:
        raise SizeCapExceeded(f"brute force capped at n<={max_n}, k<={max_k}; got n={n}, k={k}")
    order = sorted(range(k), key=lambda p: -g.part_degree(p))
    full = (1 << n) - 1
    nbr = g.nbr.tolist()

    deadline = None if time_budget is None else time.monotonic() + time_budget
    start = time.monotonic()
    nodes = 0
    deepest = 1

    # forbidden[q][j]: bitmask of part-q vertices adjacent to something in row j
    forbidden = [[0] * n for _ in range(k)]
    columns: dict[int, list[int]] = {}

    def place(p: int, col: list[int]) -> list[tuple[int, int, int]]:
        changes = []
        for q in range(k):
            if q == p or q in columns:
                continue
            row_nbrs = nbr[p][q]
            for j in range(n):
                b = row_nbrs[col[j]]
                if b != NO_NEIGHBOR and not forbidden[q][j] >> b & 1:
                    forbidden[q][j] |= 1 << b
                    changes.append((q, j, b))
        return changes

    def undo(changes):
        for q, j, b in changes:
            forbidden[q][j] &= ~(1 << b)

    def assignments(p: int):
        allowed = [full & ~forbidden[p][j] for j in range(n)]
        rows = sorted(range(n), key=lambda j: allowed[j].bit_count())
        col = [0] * n

        def rec(idx: int, used: int):
            nonlocal nodes
            if idx == n:
                yield col
                return
            nodes += 1
            if deadline is not None and nodes % 4096 == 0 and time.monotonic() > deadline:
                raise BudgetExceeded(nodes, time.monotonic() - start, deepest)
            j = rows[idx]
            opts = allowed[j] & ~used
            while opts:
                low = opts & -opts
                col[j] = low.bit_length() - 1
                yield from rec(idx + 1, used | low)
                opts ^= low

        yield from rec(0, 0)

    def remaining_feasible() -> bool:
        for q in range(k):
            if q in columns:
                continue
            for j in range(n):
                if forbidden[q][j] == full:
                    return False
        return True

    def search(level: int) -> bool:
        nonlocal deepest
        deepest = max(deepest, level)
        if level == k:
            return True
        p = order[level]
        for col in assignments(p):
            columns[p] = list(col)
            changes = place(p, col)
            if remaining_feasible() and search(level + 1):
                return True
            undo(changes)
            del columns[p]
        return False

    first = order[0]
    columns[first] = list(range(n))
    place(first, columns[first])
    if not remaining_feasible() or not search(1):
        return None
    F = PartialFactor(np.column_stack([columns[p] for p in range(k)]))
    if not is_factor(g, F):
        raise InvariantViolation("brute force returned an invalid factor")
    return F


@dataclass
class VerificationReport:
    checked: int
    failures: list[int] = field(default_factory=list)
    wall_time_s: float = 0.0
    relabel_checked: int = 0
    relabel_failures: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.relabel_failures

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "checked": self.checked,
            "failures": list(self.failures),
            "relabel_checked": self.relabel_checked,
            "relabel_failures": list(self.relabel_failures),
            "passed": self.passed,
            "wall_time_s": round(self.wall_time_s, 3) if timing else None,
        }

    def summary(self) -> str:
        return f"{self.checked} instances, {len(self.failures)} failures"


def _check_range(bounds: tuple[int, int]) -> list[int]:
    lo, hi = bounds
    return [i for i in range(lo, hi) if not has_factor_by_permutation_triples(f4_instance(i))]


def relabel_spot_check(count: int = 100, seed: int = 0) -> list[int]:
    """Relabel random instances by random per-part permutations and re-check.

    Returns the draws (0-based) whose relabelled graph had no factor.
    """
    rng = np.random.default_rng(seed)
    bad = []
    for draw in range(count):
        g = f4_instance(int(rng.integers(F4_INSTANCE_COUNT)))
        h = relabel(g, [rng.permutation(4) for _ in range(4)])
        if not has_factor_by_permutation_triples(h):
            bad.append(draw)
    return bad


def verify_f4(limit: int | None = None, *, workers: int = 1, relabel_checks: int = 0,
              seed: int = 0) -> VerificationReport:
    """Check every instance of the [4,4,1] family (or the first ``limit``)."""
    total = F4_INSTANCE_COUNT if limit is None else min(limit, F4_INSTANCE_COUNT)
    start = time.perf_counter()
    if workers > 1 and total > 0:
        step = -(-total // (workers * 4))
        chunks = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            failures = [i for part in pool.map(_check_range, chunks) for i in part]
    else:
        failures = _check_range((0, total))
    relabel_failures = relabel_spot_check(relabel_checks, seed) if relabel_checks else []
    return VerificationReport(
        checked=total,
        failures=failures,
        wall_time_s=time.perf_counter() - start,
        relabel_checked=relabel_checks,
        relabel_failures=relabel_failures,
    )
