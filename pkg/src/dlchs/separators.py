"""Vertex separators: important separators, path witnesses, multiway cuts,
shadow covers and critical-vertex supersets."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument
from .graph import Digraph, reachable, shortest_path_between_sets

BIG = 1 << 30


@dataclass(frozen=True)
class Separator:
    vertices: frozenset
    source: frozenset
    target: frozenset


@dataclass(frozen=True)
class ShadowCover:
    sets: tuple
    seed: int
    trials: int
    exhaustive: bool


# ---- vertex-capacitated flow -----------------------------------------

def _max_flow(G: Digraph, X, Y, limit: int, undeletable=frozenset()):
    """Unit vertex capacities outside X, Y and ``undeletable``.

    Returns (value, residual, node ids) where value is capped at limit + 1 and
    is BIG when an uncuttable X->Y path exists.
    """
    n = G.n
    src, snk = 2 * n, 2 * n + 1
    cap: dict[int, dict[int, int]] = {}

    def add(u, v, c):
        cap.setdefault(u, {})
        cap.setdefault(v, {})
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    X, Y = set(X), set(Y)
    hard = X | Y | set(undeletable)
    for v in G.vertices():
        add(2 * v, 2 * v + 1, BIG if v in hard else 1)
        for w in G.succ(v):
            add(2 * v + 1, 2 * w, BIG)
    for x in X:
        if G.has_vertex(x):
            add(src, 2 * x, BIG)
    for y in Y:
        if G.has_vertex(y):
            add(2 * y + 1, snk, BIG)
    cap.setdefault(src, {})
    cap.setdefault(snk, {})
    flow = 0
    while flow <= limit:
        parent = {src: None}
        q = deque([src])
        while q and snk not in parent:
            u = q.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    q.append(v)
        if snk not in parent:
            break
        bottleneck = BIG
        v = snk
        while parent[v] is not None:
            u = parent[v]
            bottleneck = min(bottleneck, cap[u][v])
            v = u
        if bottleneck >= BIG:
            return BIG, cap, (src, snk)
        v = snk
        while parent[v] is not None:
            u = parent[v]
            cap[u][v] -= bottleneck
            cap[v][u] += bottleneck
            v = u
        flow += bottleneck
    return flow, cap, (src, snk)


def _farthest_min_cut(G: Digraph, X, Y, limit: int):
    """(size, cut) of the minimum X->Y vertex cut closest to Y; size > limit means none small."""
    value, cap, (src, snk) = _max_flow(G, X, Y, limit)
    if value > limit:
        return value, None
    # nodes that can still reach the sink in the residual graph
    back = {snk}
    q = deque([snk])
    while q:
        v = q.popleft()
        for u in cap[v]:
            if u not in back and cap[u].get(v, 0) > 0:
                back.add(u)
                q.append(u)
    cut = frozenset(v for v in G.vertices() if 2 * v not in back and 2 * v + 1 in back)
    return value, cut


def max_vertex_disjoint_paths(G: Digraph, X, Y, limit: int, undeletable=frozenset()) -> int:
    return _max_flow(G, X, Y, limit, undeletable)[0]


# ---- important separators ---------------------------------------------

def _is_separator(G: Digraph, X, Y, S) -> bool:
    return not (reachable(G, X, blocked=S) & set(Y))


def _candidates(G: Digraph, X: frozenset, Y: frozenset, p: int, out: list):
    lam, cut = _farthest_min_cut(G, X, Y, p)
    if lam > p:
        return
    if lam == 0:
        out.append(frozenset())
        return
    v = min(cut)
    sub: list = []
    _candidates(G.remove_vertices([v]), X, Y, p - 1, sub)
    out.extend(S | {v} for S in sub)
    _candidates(G, X | {v}, Y, p, out)


def important_separator_sets(G: Digraph, X, Y, p: int) -> list[frozenset]:
    """Important X->Y separators of size <= p as sorted frozensets."""
    X = frozenset(v for v in X if G.has_vertex(v))
    Y = frozenset(v for v in Y if G.has_vertex(v))
    if X & Y:
        raise InvalidArgument("source and target sets must be disjoint")
    if p < 0:
        return []
    if not X or not Y:
        return [frozenset()]
    cands: list[frozenset] = []
    _candidates(G, X, Y, p, cands)
    cands = sorted(set(cands), key=lambda s: (len(s), sorted(s)))
    ranges = {S: frozenset(reachable(G, X, blocked=S)) for S in cands}
    out = []
    for S in cands:
        if any(_is_separator(G, X, Y, S - {v}) for v in S):
            continue
        if any(len(T) <= len(S) and ranges[S] < ranges[T] for T in cands):
            continue
        out.append(S)
    return out


def enumerate_important_separators(G: Digraph, X, Y, p: int) -> list[Separator]:
    """Every important X->Y separator of size at most p, deterministic order."""
    X, Y = frozenset(X), frozenset(Y)
    return [Separator(S, X, Y) for S in important_separator_sets(G, X, Y, p)]


# ---- path witnesses ----------------------------------------------------

def witness_bound(k: int) -> int:
    return (k + 1) * 4 ** (k + 1)


def path_witness_single(G: Digraph, x: int, Y: Iterable[int], k: int) -> frozenset:
    """Subset Y' of Y such that any S (|S| <= k) keeping an x->Y path keeps an x->Y' path.

    Each target is dropped (ascending id) unless some important x->(Y' - v)
    separator of size <= k leaves it reachable.
    """
    Y = sorted(v for v in set(Y) if G.has_vertex(v))
    if not G.has_vertex(x):
        return frozenset()
    if x in Y:
        return frozenset((x,))
    reach = reachable(G, [x])
    kept = [v for v in Y if v in reach]
    for v in list(kept):
        others = [y for y in kept if y != v]
        H, ystar = G.with_new_vertex(in_from=others)
        seps = important_separator_sets(H, {x}, {ystar}, k)
        if not any(v in reachable(H, [x], blocked=S) for S in seps):
            kept.remove(v)
    return frozenset(kept)


def _witness_pair(G: Digraph, X, Y, k: int) -> tuple[frozenset, frozenset]:
    X = [v for v in set(X) if G.has_vertex(v)]
    Y = [v for v in set(Y) if G.has_vertex(v)]
    if not X or not Y:
        return frozenset(), frozenset()
    H, xs = G.with_new_vertex(out_to=sorted(X))
    Yp = path_witness_single(H, xs, Y, k)
    R, ys = G.reverse().with_new_vertex(out_to=sorted(Yp))
    Xp = path_witness_single(R, ys, X, k)
    return Xp, Yp


def path_witness_pair(G: Digraph, X, Y, k: int, *, allow_overlap: bool = False) -> tuple[frozenset, frozenset]:
    """(X', Y') such that an X->Y path in G - S implies an X'->Y' path, for |S| <= k."""
    if not allow_overlap and set(X) & set(Y):
        raise InvalidArgument("path_witness_pair needs disjoint X and Y")
    return _witness_pair(G, X, Y, k)


def path_witness_multi(G: Digraph, sets: Sequence[Iterable[int]], k: int) -> list[frozenset]:
    """Union over ordered pairs of path_witness_pair outputs."""
    sets = [frozenset(s) for s in sets]
    for i, j in combinations(range(len(sets)), 2):
        if sets[i] & sets[j]:
            raise InvalidArgument("path_witness_multi needs pairwise disjoint sets")
    acc = [set() for _ in sets]
    for i in range(len(sets)):
        for j in range(len(sets)):
            if i != j:
                Xi, Xj = _witness_pair(G, sets[i], sets[j], k)
                acc[i] |= Xi
                acc[j] |= Xj
    return [frozenset(a) for a in acc]


# ---- multiway cut ------------------------------------------------------

def _violating_path(G: Digraph, terminals: list[frozenset], blocked) -> list[int] | None:
    for i, Xi in enumerate(terminals):
        others = set().union(*(Xj for j, Xj in enumerate(terminals) if j != i))
        if not others:
            continue
        P = shortest_path_between_sets(G, Xi, others, blocked=blocked)
        if P is not None:
            return P
    return None


def multiway_cut(G: Digraph, terminals: Sequence[Iterable[int]], p: int) -> frozenset | None:
    """Minimum set disjoint from all terminal sets cutting every X_i -> X_j path, if of size <= p.

    Iterative deepening over budgets; each node branches on the internal
    vertices of a shortest violating path, so the first hit has minimum size.
    """
    terms = [frozenset(v for v in t if G.has_vertex(v)) for t in terminals]
    for i, j in combinations(range(len(terms)), 2):
        if terms[i] & terms[j]:
            raise InvalidArgument("terminal sets must be pairwise disjoint")

    def search(blocked: frozenset, budget: int) -> frozenset | None:
        P = _violating_path(G, terms, blocked)
        if P is None:
            return blocked
        if budget == 0:
            return None
        for v in P[1:-1]:
            r = search(blocked | {v}, budget - 1)
            if r is not None:
                return r
        return None

    for b in range(0, max(p, -1) + 1):
        r = search(frozenset(), b)
        if r is not None:
            return r
    return None


# ---- shadows -----------------------------------------------------------

def shadow_of(G: Digraph, T: Iterable[int], S: Iterable[int]) -> frozenset:
    """Vertices outside S unreachable from T or unable to reach T in G - S."""
    S = frozenset(S)
    T = [t for t in T if t not in S]
    fwd = reachable(G, T, blocked=S)
    bwd = reachable(G, T, blocked=S, reverse=True)
    return frozenset(v for v in G.vertices() if v not in S and (v not in fwd or v not in bwd))


def default_shadow_trials(k: int, n: int) -> int:
    logn = math.log2(n) if n > 1 else 1.0
    return min(4096, 2 ** min(k * k, 12) * max(1, math.ceil(logn * logn)))


def cover_shadow(G: Digraph, T: Iterable[int], k: int, trials: int | None = None, seed: int = 0) -> ShadowCover:
    """Candidate sets Z_i meant to contain the shadow of an unknown solution S.

    Each Z_i is the shadow of a candidate deletion set S' of size <= k drawn
    from V - T (all of them when there are at most ``trials``, otherwise a
    seeded uniform sample). The empty set is always included.
    """
    T = frozenset(T)
    if not T:
        raise InvalidArgument("cover_shadow needs a nonempty T")
    n = G.num_vertices()
    if trials is None:
        trials = default_shadow_trials(k, n)
    pool = [v for v in G.vertices() if v not in T]
    sizes = [math.comb(len(pool), r) for r in range(0, min(k, len(pool)) + 1)]
    exhaustive = sum(sizes) <= trials
    if exhaustive:
        cands: Iterable[frozenset] = (
            frozenset(c) for r in range(len(sizes)) for c in combinations(pool, r)
        )
    else:
        rng = np.random.default_rng(seed)
        weights = np.array(sizes, dtype=float) / sum(sizes)

        def sample():
            for _ in range(trials):
                r = int(rng.choice(len(sizes), p=weights))
                yield frozenset(int(v) for v in rng.choice(pool, size=r, replace=False)) if r else frozenset()

        cands = sample()
    seen = {frozenset()}
    sets = [frozenset()]
    for Sp in cands:
        Z = shadow_of(G, T, Sp) - T
        if Z not in seen:
            seen.add(Z)
            sets.append(Z)
    return ShadowCover(tuple(sets), seed, trials, exhaustive)


# ---- critical vertices ---------------------------------------------------

EXHAUSTIVE_CRITICAL_N = 12


def critical_superset(G: Digraph, U: Iterable[int], t: int, k: int) -> frozenset:
    """Superset of the k-critical vertices for arc set U and root t.

    w is critical when some (v,w) in U and some S (|S| <= k, t not in S) leave
    v reachable from t while no arc of U is traversable from t in G - S. Up to
    12 vertices this is decided exactly; above that every head of U is returned.
    """
    U = [a for a in U if a in set(G.arc_ids())]
    if not U:
        return frozenset()
    if not G.has_vertex(t):
        raise InvalidArgument("root vertex must be alive")
    pairs = [G.arc(a) for a in U]
    if G.num_vertices() > EXHAUSTIVE_CRITICAL_N:
        return frozenset(w for _, w in pairs)
    pool = [v for v in G.vertices() if v != t]
    out: set[int] = set()
    for r in range(0, min(k, len(pool)) + 1):
        for S in combinations(pool, r):
            S = frozenset(S)
            reach = reachable(G, [t], blocked=S)
            if any(v in reach and w not in S for v, w in pairs):
                continue
            out.update(w for v, w in pairs if v in reach)
    return frozenset(out)
