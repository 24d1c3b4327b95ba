"""Extremal and random [k,n,1]-graphs."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import PartialFactor, SparsePartiteGraph, new_graph
from .matching import BipartiteAdjacency

__all__ = [
    "LatinSquare",
    "cyclic_latin_square",
    "first_column_clique",
    "catlin",
    "latin_greedy_trap",
    "greedy_trap_instance",
    "random_knd1",
]


@dataclass(frozen=True, eq=False)
class LatinSquare:
    cells: np.ndarray

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int64)
        q = cells.shape[0]
        if cells.shape != (q, q):
            raise ValueError("a Latin square must be square")
        symbols = np.arange(q)
        for r in range(q):
            if not np.array_equal(np.sort(cells[r]), symbols):
                raise ValueError(f"row {r} is not a permutation")
            if not np.array_equal(np.sort(cells[:, r]), symbols):
                raise ValueError(f"column {r} is not a permutation")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def order(self) -> int:
        return self.cells.shape[0]


def cyclic_latin_square(q: int) -> LatinSquare:
    """``L(a, b) = (a + b) mod q``."""
    idx = np.arange(q)
    return LatinSquare((idx[:, None] + idx[None, :]) % q)


def first_column_clique(k: int) -> SparsePartiteGraph:
    """[k, k-1, 1]-graph whose only edges join vertex 0 of every pair of parts.

    Every independent transversal uses exactly one vertex 0, and there are k
    of them, so no factor exists.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    g = new_graph(k, k - 1)
    for i in range(k):
        for j in range(i + 1, k):
            g.add_edge(i, 0, j, 0)
    return g


def catlin(k: int) -> SparsePartiteGraph:
    """Catlin's [k,k,1]-graph: identity matchings on indices ``0..k-3``, crossed on the last two.

    For odd k it has no factor of independent transversals.
    """
    if k < 3:
        raise ValueError("Catlin's construction needs k >= 3")
    if k % 2 == 0:
        warnings.warn(f"catlin({k}): the construction is only an obstruction for odd k",
                      stacklevel=2)
    g = new_graph(k, k)
    x, y = k - 2, k - 1
    for i in range(k):
        for j in range(i + 1, k):
            for a in range(k - 2):
                g.add_edge(i, a, j, a)
            g.add_edge(i, x, j, y)
            g.add_edge(i, y, j, x)
    return g


def _check_latin(k: int, latin: LatinSquare | None) -> LatinSquare:
    if k < 3:
        raise ValueError("the greedy trap needs k >= 3")
    latin = latin if latin is not None else cyclic_latin_square(k - 1)
    if latin.order != k - 1:
        raise ValueError(f"need a Latin square of order {k - 1}")
    return latin


def latin_greedy_trap(k: int, latin: LatinSquare | None = None) -> tuple[BipartiteAdjacency, tuple[int, ...]]:
    """Final-stage auxiliary graph on which greedy Hall extension gets stuck.

    n = 2k - 3. Rows ``0..k-2`` (the trapped transversals) are non-adjacent to
    right vertices ``0..k-2`` (the set returned as W); every other pair is an
    edge. So ``|N(W)| = n - (k-1) = k - 2 < |W|``.
    """
    _check_latin(k, latin)
    n = 2 * k - 3
    adj = np.ones((n, n), dtype=bool)
    adj[: k - 1, : k - 1] = False
    return BipartiteAdjacency(adj), tuple(range(k - 1))


def greedy_trap_instance(k: int, latin: LatinSquare | None = None) -> tuple[SparsePartiteGraph, PartialFactor]:
    """A full [k, 2k-3, 1]-graph plus a pinned (k-1)-partial factor of independent transversals.

    The partial factor has row j = (j, ..., j). For a, b < k-1, vertex a of part
    ``L(a, b)`` is joined to vertex b of the last part, so each of the first k-1
    last-part vertices hits every one of the first k-1 rows. The auxiliary
    graph of this pair equals :func:`latin_greedy_trap`.
    """
    latin = _check_latin(k, latin)
    n = 2 * k - 3
    g = new_graph(k, n)
    last = k - 1
    for a in range(k - 1):
        for b in range(k - 1):
            g.add_edge(int(latin.cells[a, b]), a, last, b)
    rows = np.repeat(np.arange(n)[:, None], k - 1, axis=1)
    return g, PartialFactor(rows)


def random_knd1(k: int, n: int, rng) -> SparsePartiteGraph:
    """Random [k,n,1]-graph with an independent uniform perfect matching per pair.

    ``rng`` is a ``numpy.random.Generator`` or anything ``default_rng`` accepts.
    """
    rng = np.random.default_rng(rng)
    g = new_graph(k, n)
    idx = np.arange(n)
    for i in range(k):
        for j in range(i + 1, k):
            perm = rng.permutation(n)
            g.nbr[i, j] = perm
            g.nbr[j, i, perm] = idx
    return g
