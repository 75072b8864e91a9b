"""Portal/cluster structure of G - t, outlets on inter-cluster paths and the
important-cluster-separator solver."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .cycles import short_cycle_through
from .errors import InvalidArgument
from .graph import (
    INF,
    Digraph,
    all_distances,
    bfs_distances,
    long_arcs,
    shortest_path_between_sets,
    strong_components,
)
from .reppaths import rep_paths_bounded_cf
from .separators import (
    _max_flow,
    _witness_pair,
    important_separator_sets,
    path_witness_multi,
    path_witness_single,
)


# ---- decomposition -------------------------------------------------------

@dataclass(frozen=True)
class ComponentClusters:
    vertices: frozenset
    portals: frozenset
    clusters: tuple  # frozensets, ordered by smallest member

    def cluster_of(self, v: int) -> int | None:
        for i, L in enumerate(self.clusters):
            if v in L:
                return i
        return None


@dataclass(frozen=True)
class ClusterDecomposition:
    t: int
    ell: int
    components: tuple  # ComponentClusters in topological order of G - t
    cycles: dict = field(default_factory=dict)  # portal -> closed vertex sequence through it and t

    @property
    def radius(self) -> int:
        return 2 * self.ell * self.ell

    def cycle_set(self, v: int) -> frozenset:
        """Vertices of the fixed short cycle through portal v and t, without t."""
        return frozenset(self.cycles[v]) - {self.t}

    def component_of(self, v: int) -> ComponentClusters | None:
        for c in self.components:
            if v in c.vertices:
                return c
        return None

    def portals(self) -> frozenset:
        return frozenset().union(*(c.portals for c in self.components)) if self.components else frozenset()


def decompose(G: Digraph, t: int, ell: int) -> ClusterDecomposition:
    """Components of G - t, their portals, the clusters and one short cycle per portal."""
    if not G.has_vertex(t):
        raise InvalidArgument("decompose needs t alive")
    if long_arcs(G, ell):
        raise InvalidArgument("every arc must lie on a cycle of length <= ell")
    H = G.remove_vertices([t])
    radius = 2 * ell * ell
    comps = []
    cycles: dict[int, tuple] = {}
    for C in strong_components(H):
        GC = G.induced(C)
        portals = frozenset(v for v in C if G.degree(v) > GC.degree(v))
        balls = {}
        for v in sorted(portals):
            d = bfs_distances(GC, v)
            balls[v] = frozenset(w for w in portals if d.get(w, INF) <= radius)
        classes = sorted(set(balls.values()), key=min)
        for i in range(len(classes)):
            for j in range(i + 1, len(classes)):
                if classes[i] & classes[j]:
                    raise InvalidArgument("portal neighbourhoods overlap; medium-length cycles present?")
        for v in sorted(portals):
            w = short_cycle_through(G, v, ell, through=t)
            if w is None:
                raise InvalidArgument(f"no cycle of length <= {ell} through portal {v} and t")
            cycles[v] = w.vertices
        comps.append(ComponentClusters(frozenset(C), portals, tuple(classes)))
    return ClusterDecomposition(t, ell, tuple(comps), cycles)


def portal_distance_pairs(G: Digraph, dec: ClusterDecomposition):
    """(v, w, dist in G[C]) for ordered portal pairs of each component."""
    for comp in dec.components:
        D = all_distances(G.induced(comp.vertices))
        for v in sorted(comp.portals):
            for w in sorted(comp.portals):
                if v != w:
                    yield v, w, D[v].get(w, INF)


def cycle_crosses_clusters(dec: ClusterDecomposition, cycle: Sequence[int]) -> bool:
    """True if the closed sequence has a subpath inside one component joining two of its clusters."""
    verts = list(cycle[:-1]) if len(cycle) > 1 and cycle[0] == cycle[-1] else list(cycle)
    n = len(verts)
    for start in range(n):
        comp = dec.component_of(verts[start])
        if comp is None:
            continue
        first = comp.cluster_of(verts[start])
        if first is None:
            continue
        for step in range(1, n):
            u = verts[(start + step) % n]
            if u not in comp.vertices:
                break
            c = comp.cluster_of(u)
            if c is not None and c != first:
                return True
    return False


# ---- unbalanced clusters -------------------------------------------------

def _many_cluster_witness(G: Digraph, comp: ComponentClusters, v: int, Z, k: int):
    """Portals x_1..x_{k+2} from distinct clusters reaching v on paths sharing only Z + v."""
    GC = G.induced(comp.vertices)
    base = GC.n
    arcs = list(GC.arc_pairs())
    nodes = []
    for i, L in enumerate(comp.clusters):
        c = base + i
        nodes.append(c)
        arcs += [(c, x) for x in sorted(L)]
    src = base + len(comp.clusters)
    arcs += [(src, c) for c in nodes]
    alive = [GC.has_vertex(u) for u in range(base)] + [True] * (len(nodes) + 1)
    H = Digraph(src + 1, arcs, alive=alive)
    value, cap, _ = _max_flow(H, {src}, {v}, k + 1, undeletable=(set(Z) & comp.vertices) | {v})
    if value < k + 2:
        return None
    reps = []
    for c in nodes:
        for x in H.succ(c):
            if cap.get(2 * x, {}).get(2 * c + 1, 0) > 0:
                reps.append(x)
                break
    return reps[: k + 2]


def unbalanced_cluster_guard(G: Digraph, t: int, dec: ClusterDecomposition, Z, k: int) -> frozenset | None:
    """A small set hitting every shadowless hitting separator of size <= k when
    some component has too many clusters or too many components have two."""
    Z = frozenset(Z)
    limit = k * (k + 1) + 1
    for comp in dec.components:
        if len(comp.clusters) <= limit:
            continue
        for v in sorted(comp.vertices - Z):
            reps = _many_cluster_witness(G, comp, v, Z, k)
            if reps is not None:
                return frozenset({v}).union(*(dec.cycle_set(x) for x in reps))
        reps = [min(L) for L in comp.clusters[: limit + 1]]
        return frozenset().union(*(dec.cycle_set(x) for x in reps[1:]))
    multi = [c for c in dec.components if len(c.clusters) >= 2]
    if len(multi) > k:
        out: set[int] = set()
        for comp in multi[: k + 1]:
            out |= dec.cycle_set(min(comp.clusters[0])) | dec.cycle_set(min(comp.clusters[1]))
        return frozenset(out)
    return None


def cluster_guard_sets(G: Digraph, t: int, dec: ClusterDecomposition, k: int, V_out=()) -> tuple[frozenset, frozenset]:
    """(S_paths, S_vout): short-cycle expansions of path witnesses between the
    clusters of each component and from all portals to V_out."""
    s_paths: set[int] = set()
    for comp in dec.components:
        if len(comp.clusters) < 2:
            continue
        reps = path_witness_multi(G.induced(comp.vertices), comp.clusters, k)
        for L in reps:
            for x in L:
                s_paths |= dec.cycle_set(x)
    s_vout: set[int] = set()
    V_out = [v for v in V_out if G.has_vertex(v)]
    if V_out:
        Xp, _ = _witness_pair(G, dec.portals(), V_out, k)
        for x in Xp:
            s_vout |= dec.cycle_set(x)
    return frozenset(s_paths), frozenset(s_vout)


# ---- outlets ---------------------------------------------------------------

@dataclass(frozen=True)
class Outlet:
    path_id: int
    position: int
    vertex: int
    openness: str  # "open", "closed" or "unknown"
    witness: tuple  # escape path from the outlet into V_out


def _escape(G: Digraph, v: int, targets: set, blocked: set) -> tuple | None:
    if v in blocked:
        return None
    parent = {v: None}
    q = deque([v])
    while q:
        u = q.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return tuple(reversed(path))
        for w in G.succ(u):
            if w not in parent and w not in blocked:
                parent[w] = u
                q.append(w)
    return None


def compute_outlets(
    G: Digraph, P: Sequence[int], V_out, alpha: int, beta: int, *, path_id: int = 0, S=None
) -> list[Outlet]:
    """All (alpha, beta)-outlets of P in path order.

    For each v on P, vertices within distance < beta of some path vertex more
    than alpha positions away are forbidden; v is an outlet iff it reaches
    V_out through allowed vertices. With S given, openness is decided too.
    """
    targets = {v for v in V_out if G.has_vertex(v)}
    if not targets:
        return []
    out = []
    for i, v in enumerate(P):
        far = [w for j, w in enumerate(P) if abs(i - j) > alpha]
        marked: set[int] = set()
        if far and beta > 0:
            d = bfs_distances(G, far)
            marked = {z for z, dz in d.items() if dz < beta}
        R = _escape(G, v, targets, marked)
        if R is None:
            continue
        openness = "unknown"
        witness = R
        if S is not None:
            Sv = set(S) - {v}
            R_open = _escape(G, v, targets, marked | Sv)
            if R_open is not None:
                openness, witness = "open", R_open
            else:
                openness = "closed"
        out.append(Outlet(path_id, i, v, openness, witness))
    return out


def outlet_guess_set(G: Digraph, omega: int, V_out, k: int, beta: int) -> frozenset:
    """Vertices near omega on k-representative omega -> V_out' paths."""
    targets = [v for v in V_out if G.has_vertex(v)]
    if not targets:
        return frozenset()
    d = bfs_distances(G, omega)
    near = {v for v, dv in d.items() if dv <= beta}
    out: set[int] = set()
    for v in sorted(path_witness_single(G, omega, targets, k)):
        if v not in d:
            continue
        for R in rep_paths_bounded_cf(G, omega, v, k).paths:
            out.update(u for u in R if u in near)
    return frozenset(out)


def landing_strip(P: Sequence[int], v: int, t: int) -> list[int]:
    """v together with its t predecessors on P (fewer near the start)."""
    P = list(P)
    if v not in P:
        raise InvalidArgument("landing strip anchor is not on the path")
    pos = P.index(v)
    return P[max(0, pos - max(t, 0)): pos + 1]


# ---- cluster separator solver -------------------------------------------

@dataclass(frozen=True)
class ClusterSeparatorProblem:
    graph: Digraph
    clusters: tuple
    V_out: frozenset
    k: int
    ell: int

    def __post_init__(self):
        if len(self.clusters) < 2:
            raise InvalidArgument("a cluster separator problem needs at least two clusters")
        if any(not c for c in self.clusters) or not self.V_out:
            raise InvalidArgument("clusters and V_out must be nonempty")


def default_outlet_parameters(k: int, ell: int) -> dict:
    return {
        "alpha": 3 * ell ** 6,
        "beta": 3 * ell ** 3,
        "gamma": k * (6 * ell ** 6 + 2) + 1,
        "strip": 3 * ell ** 7 * k,
    }


def solve_cluster_separator(
    prob: ClusterSeparatorProblem,
    alpha: int | None = None,
    beta: int | None = None,
    gamma: int | None = None,
    strip: int | None = None,
) -> frozenset:
    """A set meeting every important cluster separator of size <= k."""
    G, k = prob.graph, prob.k
    params = default_outlet_parameters(k, prob.ell)
    alpha = params["alpha"] if alpha is None else alpha
    beta = params["beta"] if beta is None else beta
    gamma = params["gamma"] if gamma is None else gamma
    strip = params["strip"] if strip is None else strip
    clusters = [frozenset(c) for c in prob.clusters]
    every = frozenset().union(*clusters)
    V_out = frozenset(prob.V_out)
    out: set[int] = set()
    strips_per_path: list[list[frozenset]] = []
    pid = 0
    for i, Xi in enumerate(clusters):
        for j, Xj in enumerate(clusters):
            if i == j:
                continue
            P = shortest_path_between_sets(G, Xi, Xj)
            if P is None:
                continue
            strips = []
            for om in compute_outlets(G, P, V_out, alpha, beta, path_id=pid)[:gamma]:
                ls = frozenset(landing_strip(P, om.vertex, strip))
                out |= outlet_guess_set(G, om.vertex, V_out, k, beta)
                out |= ls
                strips.append(ls)
            strips_per_path.append(strips)
            pid += 1
    if every & V_out:
        return frozenset(out)
    choices = {frozenset()}
    for strips in strips_per_path:
        nxt = set(choices)
        for base in choices:
            for ls in strips:
                cand = base | ls
                if not (cand & every):
                    nxt.add(cand)
        choices = nxt
    for extra in sorted(choices, key=lambda s: (len(s), sorted(s))):
        for F in important_separator_sets(G, every, V_out | extra, k):
            out |= F
    return frozenset(out)
