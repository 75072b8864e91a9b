"""End-to-end solver: iterative compression, disjoint compression, isolation
branching with contraction, medium-cycle elimination and the reduction to
important hitting separators."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .clusters import (
    ClusterSeparatorProblem,
    cluster_guard_sets,
    decompose,
    solve_cluster_separator,
    unbalanced_cluster_guard,
)
from .cycles import find_cycle_in_range, has_long_cycle, is_solution, short_cycle_through
from .errors import InternalError, InvalidArgument
from .graph import (
    Digraph,
    MixedGraph,
    OriginMap,
    bfs_distances,
    contract,
    is_strong,
    line_digraph,
    long_arcs,
    mixed_fvs_reduction,
    shortest_path,
    strong_components,
    torso,
)
from .reppaths import closed_walk_family_W
from .separators import (
    cover_shadow,
    critical_superset,
    important_separator_sets,
    multiway_cut,
    path_witness_single,
)

log = logging.getLogger(__name__)


# ---- types -----------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    graph: Digraph
    k: int
    ell: int
    mode: str = "vertex"
    seed: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise InvalidArgument("k must be nonnegative")
        if self.ell < 1:
            raise InvalidArgument("ell must be at least 1")
        if self.mode not in ("vertex", "arc"):
            raise InvalidArgument(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class Solution:
    vertices: frozenset  # vertex ids, or arc ids in arc mode
    verified: bool

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass
class SolverStats:
    compression_calls: int = 0
    branch_nodes: int = 0
    ii_calls: int = 0
    lower_bound_prunes: int = 0
    exact_root_cutoffs: int = 0
    rescues: int = 0
    arc_fallbacks: int = 0


@dataclass(frozen=True)
class BranchNode:
    graph: Digraph
    k: int
    T: frozenset
    forced: frozenset = frozenset()
    origin: OriginMap = field(default_factory=OriginMap)
    depth: int = 0
    tag: str = "root"
    k_dec: int = 0
    t_dec: int = 0
    k0: int | None = None

    def __post_init__(self):
        k0 = self.k if self.k0 is None else self.k0
        object.__setattr__(self, "k0", k0)
        if len(self.forced) + self.k != k0:
            raise InternalError("forced vertices and remaining budget disagree")

    def delete(self, v: int, tag: str) -> "BranchNode":
        if v in self.T or self.origin.is_contracted(v):
            raise InternalError("branch deletes a terminal or contracted vertex")
        return BranchNode(
            self.graph.remove_vertices([v]), self.k - 1, self.T, self.forced | {v},
            self.origin, self.depth + 1, tag, self.k_dec + 1, self.t_dec, self.k0,
        )

    def sort_key(self):
        return (self.depth, sorted(self.forced), self.tag, sorted(self.T))

    def ident(self):
        return (self.graph.key(), self.k, self.T, self.forced)


@dataclass(frozen=True)
class HittingSeparatorSubproblem:
    graph: Digraph
    k: int
    ell: int
    t: int
    Z: frozenset
    V_out: frozenset

    def check(self) -> None:
        G, ell = self.graph, self.ell
        if not G.has_vertex(self.t) or not is_strong(G):
            raise InvalidArgument("subproblem graph must be strong and contain t")
        if has_long_cycle(G.remove_vertices([self.t]), ell) is not None:
            raise InvalidArgument("cf(G - t) exceeds ell")
        if ell > 1 and find_cycle_in_range(G, ell, 2 * ell ** 6) is not None:
            raise InvalidArgument("medium-length cycle present")
        if long_arcs(G, ell):
            raise InvalidArgument("some arc lies on no short cycle")


# ---- small helpers ---------------------------------------------------------

def _medium_bound(ell: int) -> int:
    return 2 * ell ** 6


def _packing_exceeds(G: Digraph, ell: int, k: int, T=frozenset()) -> bool:
    """True if greedy vertex-disjoint long cycles (or one inside T) rule out budget k."""
    H = G
    count = 0
    while True:
        w = has_long_cycle(H, ell)
        if w is None:
            return False
        if set(w.vertices) <= T:
            return True
        count += 1
        if count > k:
            return True
        H = H.remove_vertices(w.vertices)


def _brute_search(G: Digraph, k: int, ell: int, T=frozenset()) -> frozenset | None:
    """Bounded search tree: branch on the non-T vertices of some long cycle."""
    w = has_long_cycle(G, ell)
    if w is None:
        return frozenset()
    if k == 0:
        return None
    for v in w.vertices:
        if v in T:
            continue
        r = _brute_search(G.remove_vertices([v]), k - 1, ell, T)
        if r is not None:
            return r | {v}
    return None


def _arc_search(G: Digraph, k: int, ell: int) -> frozenset | None:
    """Bounded search tree on arcs: some arc pair of a long cycle loses all its copies."""
    w = has_long_cycle(G, ell)
    if w is None:
        return frozenset()
    seq = w.sequence
    for u, v in zip(seq, seq[1:]):
        ids = [a for a in G.out_arcs(u) if G.heads[a] == v]
        if len(ids) > k:
            continue
        r = _arc_search(G.remove_arcs(ids), k - len(ids), ell)
        if r is not None:
            return r | frozenset(ids)
    return None


def _short_t_cycle(G: Digraph, T: frozenset, ell: int):
    Ts = sorted(v for v in T if G.has_vertex(v))
    for a, b in combinations(Ts, 2):
        w = short_cycle_through(G, a, ell, through=b)
        if w is not None:
            return w
    return None


def _long_path_exists(G: Digraph, a: int, b: int, length: int) -> bool:
    """Simple a->b path with at least ``length`` arcs."""
    if a == b:
        return length <= 0
    d = bfs_distances(G, a)
    if b not in d:
        return False
    if d[b] >= length:
        return True
    on = {a}

    def dfs(u: int, depth: int) -> bool:
        for w in G.succ(u):
            if w in on:
                continue
            if w == b:
                if depth + 1 >= length:
                    return True
                continue
            on.add(w)
            if dfs(w, depth + 1):
                return True
            on.discard(w)
        return False

    return dfs(a, 0)


def _p2_violation(G: Digraph, X: frozenset, ell: int):
    """First (a, b, P_ba) breaking the contraction condition on X, else None."""
    GX = G.induced(X)
    for a in sorted(X):
        for b in sorted(X):
            if a == b:
                continue
            P = shortest_path(G.remove_vertices(X - {a, b}), b, a)
            if P is None or len(P) - 1 > ell:
                continue
            if _long_path_exists(GX, a, b, ell):
                return a, b, P
    return None


def _contractible(G: Digraph, X: frozenset, ell: int) -> bool:
    GX = G.induced(X)
    if not is_strong(GX) or has_long_cycle(GX, ell) is not None:
        return False
    if ell > 1 and ell * ell > ell + 1 and find_cycle_in_range(G, ell, ell * ell) is not None:
        return False
    return _p2_violation(G, X, ell) is None


# ---- isolation branching ---------------------------------------------------

def _expand(node: BranchNode, ell: int, seed: int) -> list[BranchNode]:
    """Children of one application of the isolation branching rule."""
    G, T = node.graph, node.T
    if len([v for v in T if G.has_vertex(v)]) <= 1 or node.k < 0:
        return []
    out: list[BranchNode] = []
    cyc = _short_t_cycle(G, T, ell)
    if cyc is not None:
        if node.k > 0:
            for v in cyc.vertices:
                if v not in T:
                    out.append(node.delete(v, "short-T-cycle"))
        walks = [tuple(cyc.sequence)]
        keep_tag = "short-T-cycle-keep"
    else:
        try:
            walks = list(closed_walk_family_W(G, T, node.k, ell, seed).walks)
        except InvalidArgument:
            return out
        keep_tag = "closed-walk"
    medium = None
    if ell * ell > ell:
        medium = find_cycle_in_range(G, ell, ell * ell, inclusive_hi=True)
    for W in walks:
        X = frozenset(W)
        if medium is not None:
            if node.k > 0:
                out.extend(node.delete(v, "medium-P1") for v in medium.vertices if v not in T)
            continue
        viol = _p2_violation(G, X, ell)
        if viol is not None:
            _, _, P = viol
            if node.k > 0:
                out.extend(node.delete(v, "P2") for v in P[1:-1] if v not in T)
            continue
        if not _contractible(G, X, ell):
            continue
        H, origin = contract(G, X, node.origin)
        x = H.n - 1
        newT = frozenset((T - X) | {x})
        out.append(BranchNode(
            H, node.k, newT, node.forced, origin, node.depth + 1, keep_tag + "-contract",
            node.k_dec, node.t_dec + len(T & X) - 1, node.k0,
        ))
    seen = set()
    uniq = []
    for c in out:
        if c.ident() not in seen:
            seen.add(c.ident())
            uniq.append(c)
    return sorted(uniq, key=BranchNode.sort_key)


def isolate_branching(G: Digraph, k: int, ell: int, T: Iterable[int], seed: int = 0) -> list[BranchNode]:
    """Pass-through node followed by the branch nodes of one isolation step."""
    T = frozenset(T)
    root = BranchNode(G, k, T, tag="pass-through")
    if len(T) <= 1:
        return [root]
    return [root] + _expand(root, ell, seed)


def _isolation_tree(root: BranchNode, ell: int, seed: int):
    """All nodes of the isolation tree, lowest depth first."""
    limit = root.k + len(root.T) - 1
    level = [root]
    seen = {root.ident()}
    while level:
        for node in level:
            yield node
        nxt = []
        for node in level:
            if node.depth >= limit:
                continue
            for c in _expand(node, ell, seed):
                if c.ident() not in seen:
                    seen.add(c.ident())
                    nxt.append(c)
        level = sorted(nxt, key=BranchNode.sort_key)


# ---- medium cycles ---------------------------------------------------------

def eliminate_medium_cycles(node: BranchNode, ell: int) -> list[BranchNode]:
    """Leaves of branching on medium-length cycles; dead ends are dropped."""
    w = find_cycle_in_range(node.graph, ell, _medium_bound(ell)) if ell > 1 else None
    if w is None:
        return [node]
    if node.k == 0:
        return []
    out = []
    for v in w.vertices:
        if v in node.T or node.origin.is_contracted(v):
            continue
        out.extend(eliminate_medium_cycles(node.delete(v, "medium"), ell))
    return out


# ---- isolating intersection ------------------------------------------------

def hitting_separator_dispatch(sub: HittingSeparatorSubproblem) -> frozenset:
    G, k, ell, t = sub.graph, sub.k, sub.ell, sub.t
    V_out = frozenset(v for v in sub.V_out if G.has_vertex(v))
    dec = decompose(G, t, ell)
    guard = unbalanced_cluster_guard(G, t, dec, sub.Z, k)
    if guard is not None:
        return guard
    s_paths, s_vout = cluster_guard_sets(G, t, dec, k, V_out)
    s_sc = s_paths | s_vout
    comps = [(c, c.vertices & V_out) for c in dec.components]
    for c, out in comps:
        if len(c.clusters) >= 2 and not out:
            cut = multiway_cut(G.induced(c.vertices), c.clusters, k)
            return s_sc | (cut or frozenset())
    for c, out in comps:
        if len(c.clusters) == 1 and out:
            L = c.clusters[0]
            if L & out:
                return s_sc
            seps = important_separator_sets(G.induced(c.vertices), L, out, k)
            return s_sc.union(*seps) if seps else s_sc
    for c, out in comps:
        if len(c.clusters) >= 2 and out:
            prob = ClusterSeparatorProblem(G.induced(c.vertices), c.clusters, out, k, ell)
            return s_sc | solve_cluster_separator(prob)
    return s_sc


def isolating_intersection_candidates(
    G: Digraph, k: int, ell: int, T: Iterable[int], seed: int = 0, trials: int | None = None
) -> frozenset:
    """Union over shadow-cover sets Z and terminals t of the critical,
    disjointness and hitting-separator candidate sets."""
    T = frozenset(v for v in T if G.has_vertex(v))
    if not T or has_long_cycle(G, ell) is None:
        return frozenset()
    out: set[int] = set()
    cover = cover_shadow(G, T, k, trials=trials, seed=seed)
    per_t = {}
    for t in sorted(T):
        Gt = G.remove_vertices(T - {t})
        A_long = long_arcs(Gt, ell)
        G0 = Gt.remove_arcs(A_long)
        C_star = next(C for C in strong_components(G0) if t in C)
        per_t[t] = (A_long, C_star, G0.induced(C_star))
    for Z in cover.sets:
        Z = frozenset(Z) - T
        for t in sorted(T):
            A_long, C_star, G_star = per_t[t]
            Tor, U_long = torso(G, Z, A_long)
            inside = C_star - Z
            U = set(U_long)
            for a in Tor.arc_ids():
                u, v = Tor.arc(a)
                if u in inside and v not in inside:
                    U.add(a)
            V_out = frozenset(Tor.arc(a)[0] for a in U) & C_star
            out |= critical_superset(Tor, U, t, k)
            out.add(t)
            if V_out:
                out |= path_witness_single(G, t, V_out, k)
            if t in V_out:
                continue
            sub = HittingSeparatorSubproblem(G_star, k, ell, t, Z & C_star, V_out)
            out |= hitting_separator_dispatch(sub)
    return frozenset(out)


# ---- disjoint compression --------------------------------------------------

class _Search:
    def __init__(self, ell: int, seed: int, stats: SolverStats, trials: int | None = None):
        self.ell = ell
        self.seed = seed
        self.stats = stats
        self.trials = trials
        self.memo: dict = {}

    def ii_branch(self, G: Digraph, k: int, T: frozenset, origin: OriginMap) -> frozenset | None:
        key = (G.key(), k, T)
        if key in self.memo:
            return self.memo[key]
        res = self._ii_branch(G, k, T, origin)
        self.memo[key] = res
        return res

    def _ii_branch(self, G, k, T, origin):
        if has_long_cycle(G, self.ell) is None:
            return frozenset()
        if k == 0 or _packing_exceeds(G, self.ell, k, T):
            self.stats.lower_bound_prunes += k > 0
            return None
        self.stats.ii_calls += 1
        cands = isolating_intersection_candidates(G, k, self.ell, T, self.seed, self.trials)
        for v in sorted(cands):
            if v in T or origin.is_contracted(v) or not G.has_vertex(v):
                continue
            r = self.ii_branch(G.remove_vertices([v]), k - 1, T, origin)
            if r is not None:
                return r | {v}
        return None

    def disjoint_solve(self, G: Digraph, k: int, T: frozenset) -> frozenset | None:
        """Solution of size <= k avoiding T, given cf(G - T) <= ell."""
        ell = self.ell
        if has_long_cycle(G, ell) is None:
            return frozenset()
        if k == 0 or _packing_exceeds(G, ell, k, T):
            self.stats.lower_bound_prunes += k > 0
            return None
        root = BranchNode(G, k, T, tag="pass-through")
        for node in _isolation_tree(root, ell, self.seed):
            self.stats.branch_nodes += 1
            reached_ii = False
            for leaf in eliminate_medium_cycles(node, ell):
                if leaf.k > 0 and has_long_cycle(leaf.graph, ell) is not None:
                    reached_ii = True
                local = self.ii_branch(leaf.graph, leaf.k, leaf.T, leaf.origin)
                if local is not None:
                    if any(leaf.origin.is_contracted(v) for v in local):
                        raise InternalError("local solution touches a contracted vertex")
                    return leaf.forced | leaf.origin.lift(local)
            if node is root and not reached_ii:
                # the unbranched node was searched exhaustively
                self.stats.exact_root_cutoffs += 1
                return None
        return None


def compression_step(G: Digraph, T: Iterable[int], k: int, ell: int, *, seed: int = 0,
                     stats: SolverStats | None = None, search: _Search | None = None) -> frozenset | None:
    """Solution of size <= k for G given the solution T of size k + 1."""
    T = frozenset(T)
    if has_long_cycle(G.remove_vertices(T), ell) is not None:
        raise InvalidArgument("T is not a solution: cf(G - T) > ell")
    stats = stats if stats is not None else SolverStats()
    search = search or _Search(ell, seed, stats)
    stats.compression_calls += 1
    for r in range(0, min(k, len(T)) + 1):
        for Td in combinations(sorted(T), r):
            Td = frozenset(Td)
            sub = search.disjoint_solve(G.remove_vertices(Td), k - r, T - Td)
            if sub is not None:
                return Td | sub
    return None


def lift_solution(node: BranchNode, local: Iterable[int]) -> frozenset:
    local = frozenset(local)
    if any(node.origin.is_contracted(v) for v in local):
        raise InternalError("local solution touches a contracted vertex")
    return node.forced | node.origin.lift(local)


# ---- top level -------------------------------------------------------------

def _solve_vertex(G: Digraph, k: int, ell: int, seed: int, stats: SolverStats) -> frozenset | None:
    if has_long_cycle(G, ell) is None:
        return frozenset()
    if _packing_exceeds(G, ell, k):
        stats.lower_bound_prunes += 1
        return None
    search = _Search(ell, seed, stats)
    order = G.vertices()
    S: frozenset = frozenset()
    for i in range(1, len(order) + 1):
        Gi = G.induced(order[:i])
        if is_solution(Gi, S, ell):
            continue
        if len(S) < k:
            S = S | {order[i - 1]}
            continue
        T = S | {order[i - 1]}
        S2 = compression_step(Gi, T, k, ell, seed=seed, stats=stats, search=search)
        if S2 is None:
            S2 = _brute_search(Gi, k, ell)
            if S2 is not None:
                stats.rescues += 1
                log.warning("safety net found a solution the branching missed (step %d)", i)
        if S2 is None:
            return None
        S = S2
    return S


def solve(inst: Instance, stats: SolverStats | None = None) -> Solution | None:
    """A verified solution of size <= k, or None when none exists."""
    stats = stats if stats is not None else SolverStats()
    G = inst.graph
    if inst.mode == "arc":
        # Vertex solutions of the line digraph hit every long closed trail, so
        # they are valid but can overshoot; a failure there is rechecked by
        # direct arc branching.
        L, arc_of = line_digraph(G)
        sub = _solve_vertex(L, inst.k, inst.ell, inst.seed, stats)
        if sub is not None:
            arcs = frozenset(arc_of[v] for v in sub)
        else:
            arcs = _arc_search(G, inst.k, inst.ell)
            if arcs is None:
                return None
            stats.arc_fallbacks += 1
        ok = has_long_cycle(G.remove_arcs(arcs), inst.ell) is None and len(arcs) <= inst.k
    else:
        sub = _solve_vertex(G, inst.k, inst.ell, inst.seed, stats)
        if sub is None:
            return None
        arcs = sub
        ok = is_solution(G, sub, inst.ell) and len(sub) <= inst.k
    if not ok:
        raise InternalError("solver produced an unverified solution")
    return Solution(frozenset(arcs), True)


def minimum_solution(inst: Instance, stats: SolverStats | None = None) -> Solution | None:
    """Run the solver with decreasing k until it fails; the last success is optimal."""
    best = solve(inst, stats)
    while best is not None and best.size > 0:
        nxt = solve(Instance(inst.graph, best.size - 1, inst.ell, inst.mode, inst.seed), stats)
        if nxt is None:
            break
        best = nxt
    return best


def solve_mixed(M: MixedGraph, k: int, seed: int = 0, stats: SolverStats | None = None) -> frozenset | None:
    """Mixed feedback vertex set via the ell = 2 reduction; ids of M."""
    red = mixed_fvs_reduction(M)
    sol = solve(Instance(red.graph, k, red.ell, "vertex", seed), stats)
    if sol is None:
        return None
    return red.lift(sol.vertices)
