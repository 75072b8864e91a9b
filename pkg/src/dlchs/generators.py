"""Seeded instance generators and the two tightness gadgets."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cycles import circumference
from .errors import GenerationFailure, InvalidArgument
from .graph import Digraph, is_strong
from .oracle import DEFAULT_CAP, brute_circumference

MAX_TRIES = 10_000


@dataclass(frozen=True)
class Gadget:
    """A generated graph with named terminals and named reference paths."""

    graph: Digraph
    x: int
    y: int
    paths: dict = field(default_factory=dict)


def random_gnp(n: int, p: float, rng: np.random.Generator) -> Digraph:
    """Each ordered pair (u,v), u != v, is an arc independently with probability p."""
    draws = rng.random((n, n)) if n else np.zeros((0, 0))
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and draws[u, v] < p]
    return Digraph(n, arcs)


def fig_cf3(n: int) -> Gadget:
    """Chain x = u_0, ..., u_n = y where each step offers two parallel detours.

    Unit i: u_{i-1} -> v_i^b -> u_i for b in {0,1}, plus the back arc u_i -> u_{i-1}.
    Circumference 3 and exactly 2^n distinct x->y paths.
    """
    if n < 1:
        raise InvalidArgument("fig-cf3 needs n >= 1")
    arcs = []
    for i in range(1, n + 1):
        for b in range(2):
            v = n + 1 + 2 * (i - 1) + b
            arcs += [(i - 1, v), (v, i)]
        arcs.append((i, i - 1))
    return Gadget(Digraph(3 * n + 1, arcs), 0, n)


def fig_cf4(n: int) -> Gadget:
    """Circumference-4 gadget with x->y paths of length n (green) and 9n (red)
    and a y->x path of length 3n (blue).

    Unit i joins a_{i-1} to a_i: green arc a_{i-1} -> a_i, blue back path
    a_i -> b1 -> b2 -> a_{i-1}, and a red path a_{i-1} ~> b2 ~> b1 ~> a_i whose
    three segments each have two private internal vertices.
    """
    if n < 1:
        raise InvalidArgument("fig-cf4 needs n >= 1")
    arcs = []
    nxt = n + 1
    green, blue, red = [0], [n], [0]
    blue_units = []
    for i in range(1, n + 1):
        a0, a1 = i - 1, i
        b1, b2 = nxt, nxt + 1
        r = list(range(nxt + 2, nxt + 8))
        nxt += 8
        arcs.append((a0, a1))
        arcs += [(a1, b1), (b1, b2), (b2, a0)]
        seq = [a0, r[0], r[1], b2, r[2], r[3], b1, r[4], r[5], a1]
        arcs += list(zip(seq, seq[1:]))
        green.append(a1)
        red += seq[1:]
        blue_units.append([a1, b1, b2, a0])
    for unit in reversed(blue_units):
        blue += unit[1:]
    return Gadget(Digraph(nxt, arcs), 0, n, {"green": green, "blue": blue, "red": red})


def generate(kind: str, params: dict | None = None, seed: int = 0) -> Digraph:
    """Deterministic generator front end.

    Kinds: ``random-gnp`` (n, p), ``bounded-cf-strong`` (n, p, cf[, max_tries]),
    ``fig-cf3`` (n), ``fig-cf4`` (n). Gadget terminals are vertex 0 (x) and
    vertex n (y); use :func:`fig_cf3` / :func:`fig_cf4` to get them named.
    """
    params = dict(params or {})
    rng = np.random.default_rng(seed)
    if kind == "random-gnp":
        return random_gnp(int(params["n"]), float(params["p"]), rng)
    if kind == "bounded-cf-strong":
        n, p, target = int(params["n"]), float(params["p"]), int(params["cf"])
        tries = int(params.get("max_tries", MAX_TRIES))
        for _ in range(tries):
            G = random_gnp(n, p, rng)
            if not is_strong(G):
                continue
            cf = brute_circumference(G) if n <= DEFAULT_CAP else circumference(G)
            if cf <= target:
                return G
        raise GenerationFailure(f"no strong digraph with n={n}, cf<={target} after {tries} tries")
    if kind == "fig-cf3":
        return fig_cf3(int(params["n"])).graph
    if kind == "fig-cf4":
        return fig_cf4(int(params["n"])).graph
    raise InvalidArgument(f"unknown generator kind {kind!r}")
