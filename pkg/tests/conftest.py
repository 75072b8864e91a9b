from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dlchs.graph import Digraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_verdicts = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_verdicts] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_verdicts, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line: verdict(name, ok, detail)."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else "")
        print(line)
        request.config.stash[_verdicts].append(line)
        return ok

    return record


def cycle(n: int) -> Digraph:
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def bidirected_cycle(n: int) -> Digraph:
    arcs = [(i, (i + 1) % n) for i in range(n)] + [((i + 1) % n, i) for i in range(n)]
    return Digraph(n, arcs)


def theta() -> Digraph:
    """Cycles of lengths 3 (0->1->3->0) and 4 (0->2->4->3->0) sharing the arc 3->0."""
    return Digraph(5, [(0, 1), (1, 3), (0, 2), (2, 4), (4, 3), (3, 0)])


def random_digraphs(count: int, n_max: int, seed: int, p_lo: float = 0.1, p_hi: float = 0.6):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        p = float(rng.uniform(p_lo, p_hi))
        draws = rng.random((n, n))
        yield Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and draws[u, v] < p])


@st.composite
def digraphs(draw, max_n: int = 6, min_n: int = 1):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Digraph(n, [pq for pq, keep in zip(pairs, mask) if keep])


@pytest.fixture
def c5() -> Digraph:
    return cycle(5)
