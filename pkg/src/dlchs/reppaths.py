"""Representative families of paths and closed walks.

A family of x->y paths is k-representative when every deletion set S with
|S| <= k that leaves some x->y path alive also misses some member.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .cycles import circumference, has_long_cycle
from .errors import InvalidArgument
from .graph import Digraph, distance, is_strong, shortest_path, strong_components
from .separators import _witness_pair


@dataclass(frozen=True)
class PathFamily:
    x: int
    y: int
    paths: tuple
    k: int

    def __len__(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class HashFamily:
    universe: int
    k: int
    functions: tuple

    def __len__(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class WalkFamily:
    walks: tuple
    anchors: frozenset

    def __len__(self) -> int:
        return len(self.walks)


# ---- perfect hashing ---------------------------------------------------

@lru_cache(maxsize=None)
def perfect_hash_family(universe: int, k: int, seed: int = 0) -> HashFamily:
    """Maps {0..universe-1} -> {0..k-1}, injective on every subset of size <= k."""
    if k < 1:
        raise InvalidArgument("perfect hash family needs k >= 1")
    if universe <= k:
        return HashFamily(universe, k, (tuple(range(universe)),))
    if k == 1:
        return HashFamily(universe, k, ((0,) * universe,))
    uncovered = set(combinations(range(universe), k))
    rng = np.random.default_rng(seed)
    funcs = []
    while uncovered:
        f = tuple(int(v) for v in rng.integers(0, k, size=universe))
        hit = {c for c in uncovered if len({f[i] for i in c}) == k}
        if hit:
            funcs.append(f)
            uncovered -= hit
    return HashFamily(universe, k, tuple(funcs))


def is_perfect(fam: HashFamily) -> bool:
    for r in range(1, min(fam.k, fam.universe) + 1):
        for c in combinations(range(fam.universe), r):
            if not any(len({f[i] for i in c}) == r for f in fam.functions):
                return False
    return True


# ---- short paths (branch on the vertices of a shortest path) ----------

def monien_bound(len_bound: int, k: int) -> int:
    return max(1, len_bound) ** k


def rep_short_paths(G: Digraph, x: int, y: int, k: int, len_bound: int) -> PathFamily:
    """k-representative x->y paths: a shortest path plus, for each internal
    vertex v, the family of G - v with budget k - 1."""
    if x == y:
        return PathFamily(x, y, ((x,),), k)
    out: list[tuple] = []
    seen: set[tuple] = set()
    memo: set[tuple] = set()

    def rec(removed: frozenset, budget: int):
        key = (removed, budget)
        if key in memo:
            return
        memo.add(key)
        P = shortest_path(G, x, y, blocked=removed)
        if P is None:
            return
        if len(P) - 1 > len_bound:
            raise InvalidArgument(f"path of length {len(P) - 1} exceeds len_bound={len_bound}")
        tP = tuple(P)
        if tP not in seen:
            seen.add(tP)
            out.append(tP)
        if budget == 0:
            return
        for v in P[1:-1]:
            rec(removed | {v}, budget - 1)

    rec(frozenset(), k)
    if len(out) > monien_bound(len_bound, k):
        raise AssertionError("short-path family exceeds its size bound")
    return PathFamily(x, y, tuple(out), k)


def walk_to_path(G: Digraph, walk: Sequence[int], x: int, y: int) -> tuple:
    """First x->y path (DFS, ascending successors) inside the walk's vertex set."""
    allowed = set(walk)
    path = [x]
    on = {x}

    def dfs(u: int) -> bool:
        if u == y:
            return True
        for w in G.succ(u):
            if w in allowed and w not in on:
                path.append(w)
                on.add(w)
                if dfs(w):
                    return True
                path.pop()
                on.discard(w)
        return False

    if not dfs(x):
        raise InvalidArgument("walk does not connect its endpoints")
    return tuple(path)


# ---- long paths in strong bounded-circumference graphs ----------------

def rep_paths_bounded_cf(
    G: Digraph, x: int, y: int, k: int, spacing: int | None = None, seed: int = 0
) -> PathFamily:
    """k-representative x->y paths in a strong digraph.

    A guide path R is cut at anchors every ``spacing`` steps (default 2 cf^4).
    For each offset o, every (k+1)-th anchor starting at o splits x->y into gaps
    bridged by short-path families; a 2k-perfect hash family over the gaps and
    all index tables over its image pick one bridge per gap.
    """
    if not is_strong(G):
        raise InvalidArgument("rep_paths_bounded_cf needs a strong digraph")
    if x == y:
        return PathFamily(x, y, ((x,),), k)
    R = shortest_path(G, x, y)
    if k == 0:
        return PathFamily(x, y, (tuple(R),), k)
    cf = circumference(G)
    d = spacing if spacing is not None else 2 * cf ** 4
    if d < 1:
        raise InvalidArgument("anchor spacing must be positive")
    anchor_idx = list(range(0, len(R), d))
    bridge_bound = max(1, (cf - 1) ** 2)
    out: list[tuple] = []
    seen: set[tuple] = set()
    for o in range(k + 1):
        stops = [0] + [i for j, i in enumerate(anchor_idx) if j % (k + 1) == o and 0 < i < len(R) - 1]
        stops.append(len(R) - 1)
        gaps = [(R[a], R[b]) for a, b in zip(stops, stops[1:])]
        fams = [
            list(rep_short_paths(G, a, b, k, bridge_bound * distance(G, a, b)).paths) for a, b in gaps
        ]
        B = max(len(f) for f in fams)
        for f in fams:
            f.extend([f[0]] * (B - len(f)))
        psi_family = perfect_hash_family(len(gaps), 2 * k, seed)
        for psi in psi_family.functions:
            image = sorted(set(psi))
            for table in product(range(B), repeat=len(image)):
                pick = dict(zip(image, table))
                walk: list[int] = [x]
                for g, f in enumerate(fams):
                    walk.extend(f[pick[psi[g]]][1:])
                P = walk_to_path(G, walk, x, y)
                if P not in seen:
                    seen.add(P)
                    out.append(P)
    return PathFamily(x, y, tuple(out), k)


# ---- prefix/suffix families and closed walks --------------------------

def prefix_suffix_families(G: Digraph, s: int, t: int, k: int, d: int):
    """(R_le, R_gt): s->t paths of length <= 2d, and (prefix, suffix) pairs of length d.

    If an s->t path avoids S (|S| <= k), then some member of R_le avoids S, or
    some pair avoids S and its prefix end reaches its suffix start in G - S
    without touching the pair's other vertices.
    """
    memo: dict = {}

    def rec(removed: frozenset, a: int, b: int, depth: int):
        key = (removed, a, b, depth)
        if key in memo:
            return memo[key]
        H = G.remove_vertices(removed)
        if depth == 0:
            res = ([(a,)] if a == b else [], [((a,), (b,))])
            memo[key] = res
            return res
        if a == b:
            memo[key] = ([(a,)], [])
            return memo[key]
        le: list[tuple] = []
        gt: list[tuple] = []
        if b in H.succ(a):
            le.append((a, b))
        inner = removed | {a, b}
        Hin = G.remove_vertices(inner)
        X = [v for v in H.succ(a) if v != b]
        Y = [v for v in H.pred(b) if v != a]
        Xp, Yp = _witness_pair(Hin, X, Y, k)
        for sp in sorted(Xp):
            for tp in sorted(Yp):
                sub_le, sub_gt = rec(inner, sp, tp, depth - 1)
                le.extend((a,) + P + (b,) for P in sub_le)
                gt.extend(((a,) + Ps, Pt + (b,)) for Ps, Pt in sub_gt)
        res = (list(dict.fromkeys(le)), list(dict.fromkeys(gt)))
        memo[key] = res
        return res

    if not (G.has_vertex(s) and G.has_vertex(t)):
        return [], []
    return rec(frozenset(), s, t, d)


def _directed_family(G: Digraph, s: int, t: int, k: int, ell: int, seed: int) -> list[tuple]:
    le, gt = prefix_suffix_families(G, s, t, k, ell)
    out = list(le)
    H = G.remove_vertices([s, t])
    comp_of = {}
    for C in strong_components(H):
        for v in C:
            comp_of[v] = C
    cache: dict = {}
    for Ps, Pt in gt:
        for i, xv in enumerate(Ps):
            for j, yv in enumerate(Pt):
                C = comp_of.get(xv)
                if C is None or comp_of.get(yv) is not C:
                    continue
                key = (xv, yv)
                if key not in cache:
                    cache[key] = rep_paths_bounded_cf(H.induced(C), xv, yv, k, seed=seed).paths
                for Z in cache[key]:
                    walk = list(Ps[:i]) + list(Z) + list(Pt[j + 1:])
                    out.append(walk_to_path(G, walk, s, t))
    return list(dict.fromkeys(out))


def closed_walk_family_pair(G: Digraph, s: int, t: int, k: int, ell: int, seed: int = 0) -> WalkFamily:
    """Closed walks through s and t; one avoids every S (|S| <= k, cf(G - S) <= ell)
    that leaves s and t strongly connected."""
    if s == t:
        raise InvalidArgument("closed walk family needs two distinct anchors")
    if has_long_cycle(G.remove_vertices([s, t]), ell) is not None:
        raise InvalidArgument("cf(G - {s,t}) exceeds ell")
    if not (G.has_vertex(s) and G.has_vertex(t)):
        return WalkFamily((), frozenset((s, t)))
    P_st = _directed_family(G, s, t, k, ell, seed)
    P_ts = _directed_family(G, t, s, k, ell, seed)
    walks = tuple(dict.fromkeys(P + Q[1:] for P in P_st for Q in P_ts))
    return WalkFamily(walks, frozenset((s, t)))


def closed_walk_family_W(G: Digraph, W: Iterable[int], k: int, ell: int, seed: int = 0) -> WalkFamily:
    """Union over pairs {s,t} of W of the pair family in G - (W - {s,t})."""
    W = sorted(set(v for v in W if G.has_vertex(v)))
    if has_long_cycle(G.remove_vertices(W), ell) is not None:
        raise InvalidArgument("cf(G - W) exceeds ell")
    walks: list[tuple] = []
    for s, t in combinations(W, 2):
        H = G.remove_vertices(set(W) - {s, t})
        walks.extend(closed_walk_family_pair(H, s, t, k, ell, seed).walks)
    return WalkFamily(tuple(dict.fromkeys(walks)), frozenset(W))
