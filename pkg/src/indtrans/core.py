"""[k,n,1]-graphs, transversals, partial factors, and the instance file format.

Vertices are addressed as ``(part, index)`` pairs, both 0-based. Between every
pair of parts the edges form a (possibly partial) matching, so each pair is
stored as a neighbour lookup table with ``-1`` meaning "no neighbour".
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "NO_NEIGHBOR",
    "MatchingViolation",
    "ParseError",
    "InvariantViolation",
    "SparsePartiteGraph",
    "PartialFactor",
    "new_graph",
    "add_edge",
    "is_independent_transversal",
    "is_factor",
    "induced_prefix",
    "relabel",
    "serialize",
    "parse",
    "to_json",
    "from_json",
    "read_graph",
    "write_graph",
]

NO_NEIGHBOR = -1
HEADER = "knd1 v1"


class MatchingViolation(ValueError):
    """Raised when an edge would give a vertex two neighbours in one part."""


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, field: str | None = None):
        self.lineno = lineno
        self.field = field
        where = []
        if lineno is not None:
            where.append(f"line {lineno}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class InvariantViolation(RuntimeError):
    """An internal guarantee failed. Always a bug, never a property of the input."""


class SparsePartiteGraph:
    """A k-partite graph with parts of size n whose pairwise edges are matchings.

    ``nbr[i, j, a]`` is the neighbour of vertex ``a`` of part ``i`` inside part
    ``j``, or ``NO_NEIGHBOR``. The table is kept symmetric by :meth:`add_edge`.
    """

    def __init__(self, k: int, n: int):
        # k == 1 is only reachable through induced_prefix; new_graph demands k >= 2.
        if k < 1:
            raise ValueError(f"need at least 1 part, got k={k}")
        if n < 1:
            raise ValueError(f"parts must be non-empty, got n={n}")
        self.k = int(k)
        self.n = int(n)
        self.nbr = np.full((self.k, self.k, self.n), NO_NEIGHBOR, dtype=np.int32)

    def add_edge(self, i: int, a: int, j: int, b: int) -> "SparsePartiteGraph":
        """Insert edge (i, a)-(j, b). Re-inserting an existing edge is a no-op."""
        if i == j:
            raise ValueError("edges must join two different parts")
        for part in (i, j):
            if not 0 <= part < self.k:
                raise IndexError(f"part {part} out of range [0, {self.k})")
        for idx in (a, b):
            if not 0 <= idx < self.n:
                raise IndexError(f"vertex index {idx} out of range [0, {self.n})")
        cur_a = self.nbr[i, j, a]
        cur_b = self.nbr[j, i, b]
        if cur_a == b and cur_b == a:
            return self
        if cur_a != NO_NEIGHBOR:
            raise MatchingViolation(
                f"vertex {a} of part {i} already has neighbour {cur_a} in part {j}")
        if cur_b != NO_NEIGHBOR:
            raise MatchingViolation(
                f"vertex {b} of part {j} already has neighbour {cur_b} in part {i}")
        self.nbr[i, j, a] = b
        self.nbr[j, i, b] = a
        return self

    def neighbor(self, i: int, a: int, j: int) -> int:
        return int(self.nbr[i, j, a])

    def pair_edges(self, i: int, j: int) -> list[tuple[int, int]]:
        """Edges between parts i and j as ``(a, b)`` sorted by ``a``."""
        row = self.nbr[i, j]
        return [(int(a), int(row[a])) for a in np.flatnonzero(row != NO_NEIGHBOR)]

    def edge_count(self, i: int | None = None, j: int | None = None) -> int:
        if i is not None and j is not None:
            return int(np.count_nonzero(self.nbr[i, j] != NO_NEIGHBOR))
        return int(np.count_nonzero(self.nbr != NO_NEIGHBOR)) // 2

    def part_degree(self, i: int) -> int:
        """Number of edges with one endpoint in part i."""
        return int(np.count_nonzero(self.nbr[i] != NO_NEIGHBOR))

    def validate(self) -> None:
        """Check symmetry, ranges, and the per-pair matching property."""
        k, n = self.k, self.n
        nbr = self.nbr
        if nbr.shape != (k, k, n):
            raise InvariantViolation(f"neighbour table has shape {nbr.shape}")
        if np.any((nbr < NO_NEIGHBOR) | (nbr >= n)):
            raise InvariantViolation("neighbour index out of range")
        idx = np.arange(n)
        for i in range(k):
            if np.any(nbr[i, i] != NO_NEIGHBOR):
                raise InvariantViolation(f"edges inside part {i}")
            for j in range(i + 1, k):
                fwd = nbr[i, j]
                back = nbr[j, i]
                has = fwd != NO_NEIGHBOR
                if not np.array_equal(back[fwd[has]], idx[has]):
                    raise InvariantViolation(f"pair ({i}, {j}) is not symmetric")
                if np.count_nonzero(has) != np.count_nonzero(back != NO_NEIGHBOR):
                    raise InvariantViolation(f"pair ({i}, {j}) is not symmetric")

    def copy(self) -> "SparsePartiteGraph":
        out = SparsePartiteGraph(self.k, self.n)
        out.nbr = self.nbr.copy()
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePartiteGraph):
            return NotImplemented
        return self.k == other.k and self.n == other.n and np.array_equal(self.nbr, other.nbr)

    def __repr__(self) -> str:
        return f"SparsePartiteGraph(k={self.k}, n={self.n}, edges={self.edge_count()})"


def new_graph(k: int, n: int) -> SparsePartiteGraph:
    """Edgeless graph with k parts of n vertices."""
    if k < 2:
        raise ValueError(f"need at least 2 parts, got k={k}")
    return SparsePartiteGraph(k, n)


def add_edge(g: SparsePartiteGraph, i: int, a: int, j: int, b: int) -> SparsePartiteGraph:
    return g.add_edge(i, a, j, b)


@dataclass(frozen=True, eq=False)
class PartialFactor:
    """n disjoint transversals of the first t parts.

    ``rows[j, l]`` is the vertex of part ``l`` in transversal ``j``. Every
    column must be a permutation of ``range(n)``.
    """

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64)
        if rows.ndim != 2 or rows.shape[1] < 1:
            raise ValueError(f"rows must be an n x t array with t >= 1, got shape {rows.shape}")
        n = rows.shape[0]
        expected = np.arange(n)
        for col in range(rows.shape[1]):
            if not np.array_equal(np.sort(rows[:, col]), expected):
                raise ValueError(f"column {col} is not a permutation of range({n})")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def t(self) -> int:
        return self.rows.shape[1]

    def transversal(self, j: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.rows[j])

    def extend(self, column: Sequence[int]) -> "PartialFactor":
        """Append one part; ``column[j]`` joins row j."""
        return PartialFactor(np.column_stack([self.rows, np.asarray(column, dtype=np.int64)]))

    @classmethod
    def trivial(cls, n: int) -> "PartialFactor":
        """The 1-partial factor whose row j is vertex j of part 0."""
        return cls(np.arange(n).reshape(n, 1))

    def tolist(self) -> list[list[int]]:
        return self.rows.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialFactor):
            return NotImplemented
        return np.array_equal(self.rows, other.rows)

    def __repr__(self) -> str:
        return f"PartialFactor(n={self.n}, t={self.t})"


def is_independent_transversal(g: SparsePartiteGraph, picks: Sequence[int]) -> bool:
    """True iff no two picked vertices (vertex ``picks[l]`` of part ``l``) are adjacent."""
    t = len(picks)
    if t > g.k:
        raise IndexError(f"transversal covers {t} parts but graph has {g.k}")
    for l, v in enumerate(picks):
        if not 0 <= v < g.n:
            raise IndexError(f"vertex index {v} of part {l} out of range")
    for l in range(t):
        for m in range(l + 1, t):
            if g.nbr[l, m, picks[l]] == picks[m]:
                return False
    return True


def conflicting_rows(g: SparsePartiteGraph, F: PartialFactor) -> np.ndarray:
    """Boolean mask of the rows of F that contain an edge of g."""
    rows = F.rows
    if F.n != g.n or F.t > g.k:
        raise ValueError(f"factor of shape {rows.shape} does not fit graph k={g.k}, n={g.n}")
    bad = np.zeros(F.n, dtype=bool)
    for l in range(F.t):
        for m in range(l + 1, F.t):
            bad |= g.nbr[l, m, rows[:, l]] == rows[:, m]
    return bad


def is_factor(g: SparsePartiteGraph, F: PartialFactor) -> bool:
    """True iff F covers every part and each row is an independent transversal."""
    if F.t != g.k:
        return False
    return not conflicting_rows(g, F).any()


def induced_prefix(g: SparsePartiteGraph, t: int) -> SparsePartiteGraph:
    """Subgraph induced by parts ``0..t-1``."""
    if not 1 <= t <= g.k:
        raise ValueError(f"prefix length {t} out of range [1, {g.k}]")
    out = SparsePartiteGraph(t, g.n)
    out.nbr[:] = g.nbr[:t, :t]
    return out


def relabel(g: SparsePartiteGraph, perms: Sequence[Sequence[int]]) -> SparsePartiteGraph:
    """Rename vertex a of part i to ``perms[i][a]``."""
    if len(perms) != g.k:
        raise ValueError("need one permutation per part")
    P = [np.asarray(p, dtype=np.int64) for p in perms]
    out = SparsePartiteGraph(g.k, g.n)
    for i in range(g.k):
        for j in range(g.k):
            if i == j:
                continue
            row = g.nbr[i, j]
            has = row != NO_NEIGHBOR
            out.nbr[i, j, P[i][has]] = P[j][row[has]]
    return out


def serialize(g: SparsePartiteGraph) -> str:
    """Canonical text form: pairs in lexicographic order, edges by source index."""
    lines = [f"{HEADER} k={g.k} n={g.n} base=0"]
    for i in range(g.k):
        for j in range(i + 1, g.k):
            edges = g.pair_edges(i, j)
            if edges:
                body = " ".join(f"{a}->{b}" for a, b in edges)
                lines.append(f"pair {i} {j}: {body}")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, lineno: int, field: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno, field) from None


def _parse_header(line: str, lineno: int) -> tuple[int, int]:
    tokens = line.split()
    if tokens[:2] != HEADER.split():
        raise ParseError(f"expected header starting with {HEADER!r}", lineno, "header")
    fields = {}
    for tok in tokens[2:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"malformed header token {tok!r}", lineno, "header")
        fields[key] = value
    for key in ("k", "n", "base"):
        if key not in fields:
            raise ParseError("missing header field", lineno, key)
    if fields["base"] != "0":
        raise ParseError("only base=0 is supported", lineno, "base")
    return _parse_int(fields["k"], lineno, "k"), _parse_int(fields["n"], lineno, "n")


def parse(text: str) -> SparsePartiteGraph:
    """Inverse of :func:`serialize`. Blank lines and ``#`` comments are ignored."""
    g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if g is None:
            k, n = _parse_header(line, lineno)
            try:
                g = new_graph(k, n)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, "header") from None
            continue
        head, sep, body = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 3 or parts[0] != "pair":
            raise ParseError("expected 'pair <i> <j>: a->b ...'", lineno, "pair")
        i = _parse_int(parts[1], lineno, "i")
        j = _parse_int(parts[2], lineno, "j")
        if not 0 <= i < j < g.k:
            raise ParseError(f"need 0 <= i < j < {g.k}, got ({i}, {j})", lineno, "pair")
        for tok in body.split():
            a_s, arrow, b_s = tok.partition("->")
            if not arrow:
                raise ParseError(f"malformed edge {tok!r}", lineno, "edge")
            a = _parse_int(a_s, lineno, "edge")
            b = _parse_int(b_s, lineno, "edge")
            if not (0 <= a < g.n and 0 <= b < g.n):
                raise ParseError(f"edge {tok!r} out of range", lineno, "edge")
            try:
                g.add_edge(i, a, j, b)
            except MatchingViolation as exc:
                err = MatchingViolation(f"line {lineno}, field 'edge': {exc}")
                err.lineno = lineno
                raise err from None
    if g is None:
        raise ParseError("missing header line", None, "header")
    return g


def to_json(g: SparsePartiteGraph) -> str:
    pairs = []
    for i in range(g.k):
        for j in range(i + 1, g.k):
            edges = g.pair_edges(i, j)
            if edges:
                pairs.append({"i": i, "j": j, "edges": [list(e) for e in edges]})
    return json.dumps({"k": g.k, "n": g.n, "pairs": pairs}, separators=(",", ":")) + "\n"


def from_json(text: str) -> SparsePartiteGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), exc.lineno, None) from None
    for key in ("k", "n", "pairs"):
        if key not in data:
            raise ParseError("missing key", None, key)
    try:
        g = new_graph(int(data["k"]), int(data["n"]))
    except ValueError as exc:
        raise ParseError(str(exc), None, "k/n") from None
    for p_idx, pair in enumerate(data["pairs"]):
        i, j = int(pair["i"]), int(pair["j"])
        if not 0 <= i < j < g.k:
            raise ParseError(f"need 0 <= i < j < {g.k}, got ({i}, {j})", None, f"pairs[{p_idx}]")
        for a, b in pair["edges"]:
            if not (0 <= a < g.n and 0 <= b < g.n):
                raise ParseError(f"edge {[a, b]} out of range", None, f"pairs[{p_idx}]")
            try:
                g.add_edge(i, int(a), j, int(b))
            except MatchingViolation as exc:
                raise MatchingViolation(f"pairs[{p_idx}]: {exc}") from None
    return g


def _is_json_path(path: str | os.PathLike) -> bool:
    return str(path).lower().endswith(".json")


def write_graph(g: SparsePartiteGraph, path: str | os.PathLike) -> None:
    text = to_json(g) if _is_json_path(path) else serialize(g)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_graph(path: str | os.PathLike) -> SparsePartiteGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return from_json(text) if _is_json_path(path) else parse(text)


def graph_from_pairs(k: int, n: int, pairs: Iterable[tuple[int, int, Iterable[tuple[int, int]]]]) -> SparsePartiteGraph:
    """Build a graph from ``(i, j, edges)`` triples."""
    g = SparsePartiteGraph(k, n)
    for i, j, edges in pairs:
        for a, b in edges:
            g.add_edge(i, a, j, b)
    return g
