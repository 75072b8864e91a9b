"""Seeded corpora shared by the unit and acceptance tests."""
from __future__ import annotations

import numpy as np

from dlchs.graph import Digraph


def long_girth_instance(
    rng: np.random.Generator, ell: int = 2, branches: int = 4, pendants: int = 4, triangles: bool = False
):
    """Bidirected graph whose cycles are short (<= 3) or pass t with length >= 2 ell^6.

    The base graph is a random forest on vertices 1..b plus ``branches`` edges to
    t = 0; every base edge is subdivided into a path of length >= ell^6. With
    ``triangles`` (needs ell >= 3) each branch also gets a vertex q forming a
    triangle with t and the first branch vertex, so clusters hold two portals.
    Returns (graph, t).
    """
    seg = ell ** 6
    b = int(rng.integers(2, 6))
    base = []
    for v in range(2, b + 1):
        if rng.random() < 0.7:
            base.append((int(rng.integers(1, v)), v))
    for _ in range(branches):
        base.append((0, int(rng.integers(1, b + 1))))
    n = b + 1
    und = []
    for u, v in base:
        length = seg + int(rng.integers(0, 4))
        prev = u
        first = None
        for _ in range(length - 1):
            und.append((prev, n))
            prev = n
            first = n if first is None else first
            n += 1
        und.append((prev, v))
        if triangles and u == 0:
            und += [(0, n), (n, first)]
            n += 1
    for _ in range(pendants):
        und.append((int(rng.integers(0, n)), n))
        n += 1
    arcs = [a for u, v in und for a in ((u, v), (v, u))]
    return Digraph(n, arcs), 0


def bidirected_path_component(length: int, attach_t: bool = True) -> tuple[Digraph, int, int, int]:
    """t = 0 plus a bidirected path a = 1 ... b = length + 1, both ends in a digon with t."""
    a, b = 1, length + 1
    arcs = []
    for v in range(a, b):
        arcs += [(v, v + 1), (v + 1, v)]
    if attach_t:
        arcs += [(0, a), (a, 0), (0, b), (b, 0)]
    return Digraph(b + 1, arcs), 0, a, b
