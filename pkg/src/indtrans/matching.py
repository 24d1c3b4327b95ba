"""Bipartite matching on dense square adjacency matrices.

Left vertices index rows, right vertices index columns. Everything here is a
pure function of its inputs plus an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "UNPAIRED",
    "DegreeDeficit",
    "InsufficientMatching",
    "BipartiteAdjacency",
    "PairAssignment",
    "HallWitness",
    "ReshuffleOutcome",
    "as_adjacency",
    "max_matching",
    "perfect_matching_or_witness",
    "random_pairing",
    "trim_to_exact_degree",
    "reshuffle",
    "dump_adjacency",
    "parse_adjacency",
]

UNPAIRED = -1


class DegreeDeficit(ValueError):
    pass


class InsufficientMatching(ValueError):
    """Fewer matched pairs are available than the reshuffle must retain."""


@dataclass(frozen=True, eq=False)
class BipartiteAdjacency:
    adj: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)

    @property
    def m(self) -> int:
        return self.adj.shape[0]

    def left_degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def right_degrees(self) -> np.ndarray:
        return self.adj.sum(axis=0)

    def neighborhood(self, right: np.ndarray | list[int]) -> np.ndarray:
        """Left vertices adjacent to at least one vertex of ``right``."""
        cols = np.asarray(right, dtype=np.int64)
        if cols.size == 0:
            return np.empty(0, dtype=np.int64)
        return np.flatnonzero(self.adj[:, cols].any(axis=1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteAdjacency):
            return NotImplemented
        return np.array_equal(self.adj, other.adj)

    @classmethod
    def complete(cls, m: int) -> "BipartiteAdjacency":
        return cls(np.ones((m, m), dtype=bool))

    @classmethod
    def empty(cls, m: int) -> "BipartiteAdjacency":
        return cls(np.zeros((m, m), dtype=bool))


def as_adjacency(B) -> BipartiteAdjacency:
    return B if isinstance(B, BipartiteAdjacency) else BipartiteAdjacency(B)


@dataclass(frozen=True, eq=False)
class PairAssignment:
    """``pairs[i]`` is the right vertex paired with left vertex i, or UNPAIRED.

    ``edge_flags[i]`` marks the pairs that are edges of the adjacency the
    assignment was evaluated against.
    """

    pairs: np.ndarray
    edge_flags: np.ndarray

    def __post_init__(self):
        pairs = np.array(self.pairs, dtype=np.int64)
        flags = np.array(self.edge_flags, dtype=bool)
        if pairs.shape != flags.shape or pairs.ndim != 1:
            raise ValueError("pairs and edge_flags must be 1-d arrays of equal length")
        used = pairs[pairs != UNPAIRED]
        if np.unique(used).size != used.size:
            raise ValueError("a right vertex is paired twice")
        if np.any(flags & (pairs == UNPAIRED)):
            raise ValueError("an unpaired left vertex cannot carry an edge flag")
        pairs.setflags(write=False)
        flags.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "edge_flags", flags)

    @property
    def m(self) -> int:
        return self.pairs.size

    @property
    def size(self) -> int:
        """Number of pairs that are edges (the m_t of a random pairing)."""
        return int(np.count_nonzero(self.edge_flags))

    def is_perfect_matching_of(self, B: BipartiteAdjacency) -> bool:
        B = as_adjacency(B)
        if self.m != B.m or np.any(self.pairs == UNPAIRED):
            return False
        if not np.array_equal(np.sort(self.pairs), np.arange(self.m)):
            return False
        return bool(B.adj[np.arange(self.m), self.pairs].all())

    @classmethod
    def from_matching(cls, pairs: np.ndarray) -> "PairAssignment":
        pairs = np.asarray(pairs, dtype=np.int64)
        return cls(pairs, pairs != UNPAIRED)


@dataclass(frozen=True)
class HallWitness:
    """A right-side set W whose neighbourhood is smaller than W."""

    right: tuple[int, ...]
    neighborhood: tuple[int, ...]

    @property
    def deficiency(self) -> int:
        return len(self.right) - len(self.neighborhood)


@dataclass(frozen=True)
class ReshuffleOutcome:
    success: bool
    leftover_left: tuple[int, ...]
    leftover_right: tuple[int, ...]
    kept_pairs: tuple[tuple[int, int], ...]
    leftover_matching_size: int
    final_matching: PairAssignment | None = None


def _augment_from(adj: np.ndarray, root: int, match_l: np.ndarray, match_r: np.ndarray) -> bool:
    """Breadth-first search for an augmenting path starting at free left vertex ``root``."""
    m = adj.shape[1]
    visited = np.zeros(m, dtype=bool)
    parent = np.full(m, -1, dtype=np.int64)
    frontier = np.array([root], dtype=np.int64)
    while frontier.size:
        reach = adj[frontier] & ~visited
        new = np.flatnonzero(reach.any(axis=0))
        if new.size == 0:
            return False
        # first frontier vertex (in scan order) that reaches each new right vertex
        parent[new] = frontier[np.argmax(reach[:, new], axis=0)]
        visited[new] = True
        free = new[match_r[new] == UNPAIRED]
        if free.size:
            v = int(free[0])
            while True:
                u = int(parent[v])
                prev = int(match_l[u])
                match_l[u] = v
                match_r[v] = u
                if u == root:
                    return True
                v = prev
        frontier = match_r[new]
    return False


def _maximum_matching_arrays(adj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m_left, m_right = adj.shape
    match_l = np.full(m_left, UNPAIRED, dtype=np.int64)
    match_r = np.full(m_right, UNPAIRED, dtype=np.int64)
    free_r = np.ones(m_right, dtype=bool)
    for u in range(m_left):
        cand = np.flatnonzero(adj[u] & free_r)
        if cand.size:
            v = cand[0]
            match_l[u] = v
            match_r[v] = u
            free_r[v] = False
    for u in range(m_left):
        if match_l[u] == UNPAIRED:
            # a left vertex with no augmenting path now never gains one later
            _augment_from(adj, u, match_l, match_r)
    return match_l, match_r


def max_matching(B) -> PairAssignment:
    """Maximum-cardinality matching: greedy start, then augmenting paths.

    Deterministic: vertices are scanned in index order.
    """
    B = as_adjacency(B)
    match_l, _ = _maximum_matching_arrays(B.adj)
    return PairAssignment.from_matching(match_l)


def _hall_witness(adj: np.ndarray, match_l: np.ndarray, match_r: np.ndarray) -> HallWitness:
    # Alternating reachability from unmatched right vertices. The reached left
    # vertices are all matched (else an augmenting path exists) and their
    # partners are reached too, so |N(W)| = |W| - (#unmatched right).
    in_w = match_r == UNPAIRED
    frontier = in_w.copy()
    reached_l = np.zeros(adj.shape[0], dtype=bool)
    while frontier.any():
        new_l = adj[:, frontier].any(axis=1) & ~reached_l
        if not new_l.any():
            break
        reached_l |= new_l
        mates = match_l[new_l]
        frontier = np.zeros_like(in_w)
        frontier[mates] = True
        frontier &= ~in_w
        in_w |= frontier
    right = tuple(int(v) for v in np.flatnonzero(in_w))
    nbhd = tuple(int(u) for u in np.flatnonzero(adj[:, in_w].any(axis=1)))
    return HallWitness(right, nbhd)


def perfect_matching_or_witness(B) -> PairAssignment | HallWitness:
    """A perfect matching of B, or a right-side set W with |N(W)| < |W|."""
    B = as_adjacency(B)
    match_l, match_r = _maximum_matching_arrays(B.adj)
    if np.all(match_l != UNPAIRED):
        return PairAssignment.from_matching(match_l)
    return _hall_witness(B.adj, match_l, match_r)


def random_pairing(B, rng: np.random.Generator) -> PairAssignment:
    """Pair left vertex i with right vertex ``pi(i)`` for a uniform permutation pi."""
    B = as_adjacency(B)
    pi = rng.permutation(B.m)
    flags = B.adj[np.arange(B.m), pi]
    return PairAssignment(pi, flags)


def trim_to_exact_degree(B, d: int, rng: np.random.Generator) -> BipartiteAdjacency:
    """Delete uniformly random edges from each row until every left degree is d."""
    B = as_adjacency(B)
    deg = B.left_degrees()
    if d < 0:
        raise ValueError(f"target degree must be non-negative, got {d}")
    if np.any(deg < d):
        bad = int(np.flatnonzero(deg < d)[0])
        raise DegreeDeficit(f"left vertex {bad} has degree {int(deg[bad])} < {d}")
    if np.all(deg == d):
        return B
    # keep the d edges with the smallest random keys in each row
    keys = rng.random(B.adj.shape)
    keys[~B.adj] = 2.0
    out = np.zeros_like(B.adj)
    if d > 0:
        keep = np.argpartition(keys, d - 1, axis=1)[:, :d]
        np.put_along_axis(out, keep, True, axis=1)
    return BipartiteAdjacency(out)


def reshuffle(B, M: PairAssignment, s: int, rng: np.random.Generator,
              *, deterministic_for_testing: bool = False) -> ReshuffleOutcome:
    """Retain s random flagged pairs of M, re-match the leftover graph, and splice.

    The leftover graph is induced by every vertex not covered by a flagged
    pair of M together with the endpoints of the s retained pairs. The other
    flagged pairs are kept as they are. ``deterministic_for_testing`` takes the
    first s flagged pairs instead of a random sample.
    """
    B = as_adjacency(B)
    if M.m != B.m:
        raise ValueError("assignment and adjacency sizes differ")
    if s < 0:
        raise ValueError(f"s must be non-negative, got {s}")
    flagged = np.flatnonzero(M.edge_flags)
    if not B.adj[flagged, M.pairs[flagged]].all():
        raise ValueError("a flagged pair is not an edge of B")
    if flagged.size < s:
        raise InsufficientMatching(f"only {flagged.size} matched pairs, need s={s}")

    if deterministic_for_testing:
        chosen = flagged[:s]
    else:
        chosen = np.sort(rng.choice(flagged, size=s, replace=False)) if s else flagged[:0]
    kept = np.setdiff1d(flagged, chosen)

    left_mask = np.ones(B.m, dtype=bool)
    left_mask[kept] = False
    right_mask = np.ones(B.m, dtype=bool)
    right_mask[M.pairs[kept]] = False
    left = np.flatnonzero(left_mask)
    right = np.flatnonzero(right_mask)

    sub = B.adj[np.ix_(left, right)]
    sub_match, _ = _maximum_matching_arrays(sub)
    matched = int(np.count_nonzero(sub_match != UNPAIRED))
    success = matched == left.size

    final = None
    if success:
        pairs = np.full(B.m, UNPAIRED, dtype=np.int64)
        pairs[kept] = M.pairs[kept]
        pairs[left] = right[sub_match]
        final = PairAssignment.from_matching(pairs)
    return ReshuffleOutcome(
        success=success,
        leftover_left=tuple(int(u) for u in left),
        leftover_right=tuple(int(v) for v in right),
        kept_pairs=tuple((int(u), int(M.pairs[u])) for u in kept),
        leftover_matching_size=matched,
        final_matching=final,
    )


def dump_adjacency(B) -> str:
    """Text dump reusing the instance format's pair syntax with parts 0 and 1."""
    B = as_adjacency(B)
    lines = [f"bip v1 m={B.m} base=0"]
    edges = " ".join(f"{a}->{b}" for a, b in zip(*np.nonzero(B.adj)))
    lines.append(f"pair 0 1: {edges}".rstrip())
    return "\n".join(lines) + "\n"


def parse_adjacency(text: str) -> BipartiteAdjacency:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("bip v1"):
        raise ValueError("expected 'bip v1 m=<m> base=0' header")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
    m = int(fields["m"])
    adj = np.zeros((m, m), dtype=bool)
    for ln in lines[1:]:
        head, _, body = ln.partition(":")
        if head.split() != ["pair", "0", "1"]:
            raise ValueError(f"unexpected line {ln!r}")
        for tok in body.split():
            a, _, b = tok.partition("->")
            adj[int(a), int(b)] = True
    return BipartiteAdjacency(adj)
