"""Factors of independent transversals in sparse k-partite graphs."""

from .core import (
    InvariantViolation,
    MatchingViolation,
    ParseError,
    PartialFactor,
    SparsePartiteGraph,
    add_edge,
    induced_prefix,
    is_factor,
    is_independent_transversal,
    new_graph,
    parse,
    read_graph,
    serialize,
    write_graph,
)
from .matching import (
    BipartiteAdjacency,
    HallWitness,
    PairAssignment,
    max_matching,
    perfect_matching_or_witness,
    random_pairing,
    reshuffle,
    trim_to_exact_degree,
)
from .constructions import catlin, first_column_clique, latin_greedy_trap, random_knd1
from .algorithms import (
    SolverParams,
    StageReport,
    build_auxiliary,
    greedy_hall_factor,
    semirandom_factor,
    semirandom_stage,
)
from .exhaustive import brute_force_factor, has_factor_by_permutation_triples, verify_f4

__version__ = "0.1.0"
