import itertools

import numpy as np
import pytest

from indtrans.core import PartialFactor


def brute_max_matching(adj: np.ndarray) -> int:
    """Largest number of edges hit by any permutation (independent oracle)."""
    m = adj.shape[0]
    best = 0
    for perm in itertools.permutations(range(m)):
        best = max(best, sum(bool(adj[i, perm[i]]) for i in range(m)))
        if best == m:
            break
    return best


def random_partial_factor(n: int, t: int, rng: np.random.Generator) -> PartialFactor:
    return PartialFactor(np.column_stack([rng.permutation(n) for _ in range(t)]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance verdicts, printed once at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def verdict(request):
    """Record ``(ok, detail)`` for the criterion named by the test's ``criterion`` marker."""
    number = request.node.get_closest_marker("criterion").args[0]

    def record(ok: bool, detail: str) -> bool:
        ACCEPTANCE[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    yield record
    if number not in ACCEPTANCE:
        ACCEPTANCE[number] = (False, "did not complete")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}")
