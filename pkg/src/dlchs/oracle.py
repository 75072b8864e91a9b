"""Brute-force ground truth.

Everything here works from the raw arc list with its own traversal code, so
it stays independent of the solver's cycle kernel and separator machinery.
Instances above the vertex cap are refused, never approximated.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapExceeded, InvalidArgument
from .graph import Digraph, MixedGraph

DEFAULT_CAP = 12


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"oracle refuses n={n} above cap {cap}")


def _adjacency(G: Digraph) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in G.vertices()}
    for u, v in G.arc_pairs():
        adj[u].add(v)
    return adj


def _reach(adj: dict[int, set[int]], sources: Iterable[int], removed: set) -> set[int]:
    seen = {s for s in sources if s in adj and s not in removed}
    todo = list(seen)
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                todo.append(w)
    return seen


def _reverse(adj: dict[int, set[int]]) -> dict[int, set[int]]:
    radj: dict[int, set[int]] = {v: set() for v in adj}
    for u, ws in adj.items():
        for w in ws:
            radj[w].add(u)
    return radj


def subsets_up_to(items: Iterable[int], k: int):
    items = sorted(items)
    for r in range(0, min(k, len(items)) + 1):
        for c in combinations(items, r):
            yield frozenset(c)


# ---- cycles ------------------------------------------------------------

def simple_cycles(G: Digraph, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Every simple cycle once, as a vertex tuple starting at its smallest vertex."""
    _check_cap(G.num_vertices(), cap)
    adj = _adjacency(G)
    out: list[tuple[int, ...]] = []

    succ = {v: sorted(ws) for v, ws in adj.items()}
    for s in sorted(adj):
        # explicit stack of successor cursors; same order as the recursive search
        path, on, cursor = [s], {s}, [0]
        while path:
            u = path[-1]
            i = cursor[-1]
            if i == len(succ[u]):
                on.discard(path.pop())
                cursor.pop()
                continue
            cursor[-1] += 1
            w = succ[u][i]
            if w == s and len(path) >= 2:
                out.append(tuple(path))
            elif w > s and w not in on:
                path.append(w)
                on.add(w)
                cursor.append(0)
    return out


def brute_circumference(G: Digraph, cap: int = DEFAULT_CAP) -> int:
    return max((len(c) for c in simple_cycles(G, cap)), default=0)


@dataclass
class OracleReport:
    feasible: bool
    optimum: int | None
    solutions: list[frozenset] = field(default_factory=list)
    mode: str = "vertex"
    cycles_examined: int = 0
    wall_time: float = 0.0


def _minimal_masks(masks: Iterable[frozenset]) -> list[frozenset]:
    ms = sorted(set(masks), key=len)
    keep: list[frozenset] = []
    for m in ms:
        if not any(k <= m for k in keep):
            keep.append(m)
    return keep


def brute_dlchs(G: Digraph, k: int, ell: int, mode: str = "vertex", cap: int = DEFAULT_CAP) -> OracleReport:
    """Exact optimum (if <= k) and all optimal solutions by subset enumeration."""
    t0 = time.perf_counter()
    cycles = simple_cycles(G, cap)
    long_cycles = [c for c in cycles if len(c) > ell]
    if mode == "vertex":
        masks = _minimal_masks(frozenset(c) for c in long_cycles)
        sols: list[frozenset] = []
        for r in range(0, k + 1):
            for S in combinations(G.vertices(), r):
                S = frozenset(S)
                if all(m & S for m in masks):
                    sols.append(S)
            if sols:
                return OracleReport(True, r, sols, mode, len(cycles), time.perf_counter() - t0)
        return OracleReport(False, None, [], mode, len(cycles), time.perf_counter() - t0)
    if mode != "arc":
        raise InvalidArgument(f"unknown mode {mode!r}")
    mult: dict[tuple[int, int], list[int]] = {}
    for a in G.arc_ids():
        mult.setdefault(G.arc(a), []).append(a)
    masks = _minimal_masks(
        frozenset(zip(c, c[1:] + c[:1])) for c in long_cycles
    )
    pairs = sorted(p for p in mult if len(mult[p]) <= k)
    best: int | None = None
    found: list[frozenset] = []
    for r in range(0, k + 1):
        for combo in combinations(pairs, r):
            w = sum(len(mult[p]) for p in combo)
            if w > k or (best is not None and w > best):
                continue
            cs = frozenset(combo)
            if all(m & cs for m in masks):
                if best is None or w < best:
                    best, found = w, []
                found.append(frozenset(a for p in combo for a in mult[p]))
    if best is None:
        return OracleReport(False, None, [], mode, len(cycles), time.perf_counter() - t0)
    found = sorted(set(found), key=lambda s: sorted(s))
    return OracleReport(True, best, found, mode, len(cycles), time.perf_counter() - t0)


def verify_solution(G: Digraph, S: Iterable[int], ell: int, mode: str = "vertex", cap: int = DEFAULT_CAP) -> bool:
    """Independent check that removing S leaves circumference <= ell."""
    S = set(S)
    H = G.remove_vertices(S) if mode == "vertex" else G.remove_arcs(S)
    return brute_circumference(H, cap) <= ell


# ---- mixed feedback vertex set ----------------------------------------

def _mixed_cycles(M: MixedGraph) -> list[frozenset]:
    """Vertex sets of all cycles of a mixed graph (no connection reused)."""
    out: list[frozenset] = []
    fwd: dict[tuple[int, int], int] = {}
    edge_count: dict[frozenset, int] = {}
    adj: dict[int, set[int]] = {v: set() for v in range(M.n)}
    for u, v in M.arcs:
        fwd[(u, v)] = fwd.get((u, v), 0) + 1
        adj[u].add(v)
    for u, v in M.edges:
        edge_count[frozenset((u, v))] = edge_count.get(frozenset((u, v)), 0) + 1
        adj[u].add(v)
        adj[v].add(u)
    for v, w in combinations(range(M.n), 2):
        a, b = fwd.get((v, w), 0), fwd.get((w, v), 0)
        e = edge_count.get(frozenset((v, w)), 0)
        if (a and b) or (e and (a or b)) or e >= 2:
            out.append(frozenset((v, w)))

    def dfs(s, path, on):
        for w in adj[path[-1]]:
            if w == s and len(path) >= 3:
                out.append(frozenset(path))
            elif w > s and w not in on:
                path.append(w)
                on.add(w)
                dfs(s, path, on)
                on.discard(w)
                path.pop()

    for s in range(M.n):
        dfs(s, [s], {s})
    return out


def brute_mixed_fvs(M: MixedGraph, k: int, cap: int = DEFAULT_CAP) -> OracleReport:
    _check_cap(M.n, cap)
    t0 = time.perf_counter()
    masks = _minimal_masks(_mixed_cycles(M))
    for r in range(0, k + 1):
        sols = [frozenset(S) for S in combinations(range(M.n), r) if all(m & set(S) for m in masks)]
        if sols:
            return OracleReport(True, r, sols, "mixed-fvs", len(masks), time.perf_counter() - t0)
    return OracleReport(False, None, [], "mixed-fvs", len(masks), time.perf_counter() - t0)


def is_mixed_fvs(M: MixedGraph, S: Iterable[int]) -> bool:
    S = set(S)
    return all(m & S for m in _mixed_cycles(M))


# ---- definitional enumerations ----------------------------------------

def shadow(G: Digraph, T: Iterable[int], S: Iterable[int]) -> tuple[frozenset, frozenset]:
    """(forward, reverse) shadow of S w.r.t. T; S itself is never shadowed."""
    S = set(S)
    adj = _adjacency(G)
    from_T = _reach(adj, T, S)
    to_T = _reach(_reverse(adj), T, S)
    rest = [v for v in adj if v not in S]
    fwd = frozenset(v for v in rest if v not in from_T)
    rev = frozenset(v for v in rest if v not in to_T)
    return fwd, rev


def is_separator(adj, X, Y, S) -> bool:
    return not (_reach(adj, X, set(S)) & set(Y))


def _important_by_range(cands: list[frozenset], rng, forward: bool) -> list[frozenset]:
    """Keep candidates not dominated: forward ranges maximized, backward minimized."""
    ranges = {c: rng(c) for c in cands}
    out = []
    for c in cands:
        rc = ranges[c]
        dominated = False
        for d in cands:
            if len(d) <= len(c):
                rd = ranges[d]
                if (rc < rd) if forward else (rd < rc):
                    dominated = True
                    break
        if not dominated:
            out.append(c)
    return out


def _sorted_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    return sorted(set(sets), key=lambda s: (len(s), sorted(s)))


def important_separators(G: Digraph, X, Y, p: int, cap: int = DEFAULT_CAP) -> list[frozenset]:
    """Minimal X->Y separators of size <= p not dominated in forward range."""
    _check_cap(G.num_vertices(), cap)
    X, Y = set(X), set(Y)
    adj = _adjacency(G)
    pool = [v for v in adj if v not in X and v not in Y]
    seps = [S for S in subsets_up_to(pool, p) if is_separator(adj, X, Y, S)]
    sepset = set(seps)
    minimal = [S for S in seps if not any((S - {v}) in sepset for v in S)]
    rng = lambda S: frozenset(_reach(adj, X, set(S)))
    return _sorted_sets(_important_by_range(minimal, rng, forward=True))


def _cf_at_most(G: Digraph, S, ell: int) -> bool:
    return all(len(c) <= ell for c in simple_cycles(G.remove_vertices(S), cap=10**9))


def important_hitting_separators(
    G: Digraph, X, Y, ell: int, p: int, Z=(), shadowless: bool = False, cap: int = DEFAULT_CAP
) -> list[frozenset]:
    """Hitting X->Y separators (separate and leave cf <= ell), minimal in backward range."""
    _check_cap(G.num_vertices(), cap)
    X, Y, Z = set(X), set(Y), set(Z)
    adj = _adjacency(G)
    radj = _reverse(adj)
    pool = [v for v in adj if v not in X and v not in Y and not (shadowless and v in Z)]
    cands = []
    for U in subsets_up_to(pool, p):
        if not is_separator(adj, X, Y, U) or not _cf_at_most(G, U, ell):
            continue
        if shadowless:
            fwd = _reach(adj, X | Y, U)
            bwd = _reach(radj, X | Y, U)
            if any(v not in fwd or v not in bwd for v in adj if v not in U and v not in Z):
                continue
        cands.append(U)
    rng = lambda U: frozenset(_reach(radj, Y, set(U)))
    return _sorted_sets(_important_by_range(cands, rng, forward=False))


def range_classes(G: Digraph, Y, separators: Sequence[frozenset]) -> dict[frozenset, list[frozenset]]:
    radj = _reverse(_adjacency(G))
    classes: dict[frozenset, list[frozenset]] = {}
    for U in separators:
        classes.setdefault(frozenset(_reach(radj, Y, set(U))), []).append(U)
    return classes


def is_cluster_separator(adj, clusters, Y, U) -> bool:
    U = set(U)
    for i, Xi in enumerate(clusters):
        r = _reach(adj, Xi, U)
        if r & set(Y):
            return False
        if any(r & set(Xj) for j, Xj in enumerate(clusters) if j != i):
            return False
    return True


def important_cluster_separators(G: Digraph, clusters, Y, p: int, cap: int = DEFAULT_CAP) -> list[frozenset]:
    _check_cap(G.num_vertices(), cap)
    clusters = [set(c) for c in clusters]
    Y = set(Y)
    adj = _adjacency(G)
    radj = _reverse(adj)
    terminals = set().union(*clusters) | Y
    pool = [v for v in adj if v not in terminals]
    cands = [U for U in subsets_up_to(pool, p) if is_cluster_separator(adj, clusters, Y, U)]
    rng = lambda U: frozenset(_reach(radj, Y, set(U)))
    return _sorted_sets(_important_by_range(cands, rng, forward=False))


def multiway_cuts(G: Digraph, terminals, p: int, cap: int = DEFAULT_CAP) -> list[frozenset]:
    """All minimum-size multiway cuts of size <= p (empty list if none)."""
    _check_cap(G.num_vertices(), cap)
    terminals = [set(t) for t in terminals]
    adj = _adjacency(G)
    every = set().union(*terminals) if terminals else set()
    pool = [v for v in adj if v not in every]
    for r in range(0, p + 1):
        found = []
        for c in combinations(sorted(pool), r):
            U = set(c)
            ok = True
            for i, Xi in enumerate(terminals):
                reach = _reach(adj, Xi, U)
                if any(reach & Xj for j, Xj in enumerate(terminals) if j != i):
                    ok = False
                    break
            if ok:
                found.append(frozenset(c))
        if found:
            return found
    return []


def enumerate_by_definition(kind: str, **params):
    """Dispatch to the definition-literal enumerations above."""
    if kind == "important-separator":
        return important_separators(params["G"], params["X"], params["Y"], params["p"])
    if kind == "important-hitting-separator":
        return important_hitting_separators(
            params["G"], params["X"], params["Y"], params["ell"], params["p"],
            params.get("Z", ()), params.get("shadowless", False),
        )
    if kind == "important-cluster-separator":
        return important_cluster_separators(params["G"], params["clusters"], params["Y"], params["p"])
    if kind == "multiway-cut":
        return multiway_cuts(params["G"], params["terminals"], params["p"])
    if kind == "shadow":
        fwd, rev = shadow(params["G"], params["T"], params["S"])
        return sorted(fwd | rev)
    raise InvalidArgument(f"unknown enumeration kind {kind!r}")


# ---- audits ------------------------------------------------------------

def path_survives(G: Digraph, X, Y, S) -> bool:
    adj = _adjacency(G)
    return bool(_reach(adj, X, set(S)) & (set(Y) - set(S)))


def witness_counterexample(G: Digraph, X, Y, Xp, Yp, k: int):
    """First S (|S| <= k) with an X->Y path but no X'->Y' path in G - S."""
    adj = _adjacency(G)
    for S in subsets_up_to(adj, k):
        if _reach(adj, X, set(S)) & (set(Y) - S) and not (_reach(adj, Xp, set(S)) & (set(Yp) - S)):
            return S
    return None


def representative_counterexample(G: Digraph, x: int, y: int, family: Sequence[Sequence[int]], k: int):
    """First S (|S| <= k) keeping an x->y path alive while hitting every member."""
    adj = _adjacency(G)
    sets = [set(p) for p in family]
    for S in subsets_up_to(adj, k):
        if x in S or y in S:
            continue
        if y in _reach(adj, [x], set(S)) and all(m & S for m in sets):
            return S
    return None


def closed_walk_alive(G: Digraph, s: int, t: int, S) -> bool:
    adj = _adjacency(G)
    S = set(S)
    if s in S or t in S:
        return False
    return t in _reach(adj, [s], S) and s in _reach(adj, [t], S)


def critical_vertices(G: Digraph, U: Iterable[int], t: int, k: int, cap: int = DEFAULT_CAP) -> frozenset:
    """Vertices w with (v,w) in U made critical by some S (|S| <= k, t not in S)."""
    _check_cap(G.num_vertices(), cap)
    adj = _adjacency(G)
    U = [G.arc(a) for a in U]
    out = set()
    pool = [v for v in adj if v != t]
    for S in subsets_up_to(pool, k):
        reach = _reach(adj, [t], set(S))
        if any(v in reach and w not in S for v, w in U):
            continue
        for v, w in U:
            if v in reach:
                out.add(w)
    return frozenset(out)


def outlets_by_definition(G: Digraph, P: Sequence[int], V_out, alpha: int, beta: int, cap: int = DEFAULT_CAP) -> list[int]:
    """Path vertices v with a simple v->V_out path staying >= beta away from P outside v's alpha-window."""
    _check_cap(G.num_vertices(), cap)
    adj = _adjacency(G)
    V_out = set(V_out)
    dist = {}
    for s in adj:
        d = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in d:
                        d[w] = d[u] + 1
                        nxt.append(w)
            frontier = nxt
        dist[s] = d
    out = []
    for i, v in enumerate(P):
        far = [w for j, w in enumerate(P) if abs(i - j) > alpha]

        def ok(z):
            return all(dist[w].get(z, float("inf")) >= beta for w in far)

        found = False

        def dfs(u, on):
            nonlocal found
            if found or not ok(u):
                return
            if u in V_out:
                found = True
                return
            for w in adj[u]:
                if w not in on:
                    on.add(w)
                    dfs(w, on)
                    on.discard(w)

        dfs(v, {v})
        if found:
            out.append(v)
    return out


def is_isolating(G: Digraph, S, T, ell: int) -> bool:
    """S hits all long cycles and leaves every strong component with <= 1 vertex of T."""
    S = set(S)
    H = G.remove_vertices(S)
    if not _cf_at_most(G, S, ell):
        return False
    adj = _adjacency(H)
    Tl = [t for t in T if t in adj]
    for a, b in combinations(Tl, 2):
        if b in _reach(adj, [a], set()) and a in _reach(adj, [b], set()):
            return False
    return True
