"""Directed multigraph with stable ids, connectivity primitives and constructions.

Vertices and arcs are dense integers. Deletion flips alive masks instead of
compacting, so ids never change inside a branching tree.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidArgument

INF = float("inf")


class Digraph:
    """Immutable loop-free directed multigraph.

    An arc is present when its own mask bit and both endpoint masks are set.
    All mutating operations return a new Digraph sharing the arc arrays.
    """

    __slots__ = ("n", "tails", "heads", "alive", "arc_alive", "_cache")

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]] = (),
        alive: Sequence[bool] | None = None,
        arc_alive: Sequence[bool] | None = None,
    ):
        if n < 0:
            raise InvalidArgument("vertex count must be nonnegative")
        tails: list[int] = []
        heads: list[int] = []
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgument(f"arc ({u},{v}) out of range for n={n}")
            if u == v:
                raise InvalidArgument(f"self-loop at {u} not allowed")
            tails.append(u)
            heads.append(v)
        self.n = n
        self.tails = tuple(tails)
        self.heads = tuple(heads)
        self.alive = tuple(bool(a) for a in alive) if alive is not None else (True,) * n
        m = len(tails)
        self.arc_alive = tuple(bool(a) for a in arc_alive) if arc_alive is not None else (True,) * m
        if len(self.alive) != n or len(self.arc_alive) != m:
            raise InvalidArgument("mask length mismatch")
        self._cache: dict = {}

    @classmethod
    def _raw(cls, n, tails, heads, alive, arc_alive) -> "Digraph":
        g = cls.__new__(cls)
        g.n = n
        g.tails = tails
        g.heads = heads
        g.alive = alive
        g.arc_alive = arc_alive
        g._cache = {}
        return g

    # ---- cached adjacency -------------------------------------------------
    def _adj(self):
        c = self._cache.get("adj")
        if c is not None:
            return c
        alive = self.alive
        out_arcs: list[list[int]] = [[] for _ in range(self.n)]
        in_arcs: list[list[int]] = [[] for _ in range(self.n)]
        present = []
        for a, (u, v) in enumerate(zip(self.tails, self.heads)):
            if self.arc_alive[a] and alive[u] and alive[v]:
                present.append(a)
                out_arcs[u].append(a)
                in_arcs[v].append(a)
        succ = [tuple(sorted({self.heads[a] for a in out_arcs[v]})) for v in range(self.n)]
        pred = [tuple(sorted({self.tails[a] for a in in_arcs[v]})) for v in range(self.n)]
        verts = tuple(v for v in range(self.n) if alive[v])
        c = (verts, succ, pred, out_arcs, in_arcs, tuple(present))
        self._cache["adj"] = c
        return c

    def vertices(self) -> tuple[int, ...]:
        """Alive vertex ids in ascending order."""
        return self._adj()[0]

    def vertex_set(self) -> frozenset[int]:
        c = self._cache.get("vset")
        if c is None:
            c = self._cache["vset"] = frozenset(self.vertices())
        return c

    def num_vertices(self) -> int:
        return len(self.vertices())

    def arc_ids(self) -> tuple[int, ...]:
        """Present arc ids in ascending order."""
        return self._adj()[5]

    def num_arcs(self) -> int:
        return len(self.arc_ids())

    def arc(self, a: int) -> tuple[int, int]:
        return self.tails[a], self.heads[a]

    def arc_pairs(self) -> list[tuple[int, int]]:
        return [(self.tails[a], self.heads[a]) for a in self.arc_ids()]

    def has_vertex(self, v: int) -> bool:
        return 0 <= v < self.n and self.alive[v]

    def succ(self, v: int) -> tuple[int, ...]:
        """Distinct out-neighbours, ascending."""
        return self._adj()[1][v]

    def pred(self, v: int) -> tuple[int, ...]:
        return self._adj()[2][v]

    def out_arcs(self, v: int) -> list[int]:
        return self._adj()[3][v]

    def in_arcs(self, v: int) -> list[int]:
        return self._adj()[4][v]

    def degree(self, v: int) -> int:
        """Number of incident present arcs, counted with multiplicity."""
        return len(self.out_arcs(v)) + len(self.in_arcs(v))

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.succ(u)

    def succ_masks(self) -> tuple[int, ...]:
        c = self._cache.get("smask")
        if c is None:
            succ = self._adj()[1]
            c = tuple(sum(1 << w for w in succ[v]) for v in range(self.n))
            self._cache["smask"] = c
        return c

    # ---- derived graphs ---------------------------------------------------
    def remove_vertices(self, S: Iterable[int]) -> "Digraph":
        S = set(S)
        if not S:
            return self
        alive = tuple(a and (v not in S) for v, a in enumerate(self.alive))
        return Digraph._raw(self.n, self.tails, self.heads, alive, self.arc_alive)

    def induced(self, V: Iterable[int]) -> "Digraph":
        V = set(V)
        alive = tuple(a and (v in V) for v, a in enumerate(self.alive))
        return Digraph._raw(self.n, self.tails, self.heads, alive, self.arc_alive)

    def remove_arcs(self, A: Iterable[int]) -> "Digraph":
        A = set(A)
        if not A:
            return self
        arc_alive = tuple(a and (i not in A) for i, a in enumerate(self.arc_alive))
        return Digraph._raw(self.n, self.tails, self.heads, self.alive, arc_alive)

    def reverse(self) -> "Digraph":
        return Digraph._raw(self.n, self.heads, self.tails, self.alive, self.arc_alive)

    def with_new_vertex(self, out_to: Iterable[int] = (), in_from: Iterable[int] = ()) -> tuple["Digraph", int]:
        """Append a fresh vertex with arcs to ``out_to`` and from ``in_from``."""
        x = self.n
        tails = list(self.tails)
        heads = list(self.heads)
        for v in out_to:
            tails.append(x)
            heads.append(v)
        for v in in_from:
            tails.append(v)
            heads.append(x)
        added = len(tails) - len(self.tails)
        return (
            Digraph._raw(self.n + 1, tuple(tails), tuple(heads), self.alive + (True,),
                         self.arc_alive + (True,) * added),
            x,
        )

    def compact(self) -> tuple["Digraph", list[int]]:
        """Relabel alive vertices to 0..n'-1; returns (graph, old id per new id)."""
        verts = self.vertices()
        pos = {v: i for i, v in enumerate(verts)}
        arcs = [(pos[u], pos[v]) for u, v in self.arc_pairs()]
        return Digraph(len(verts), arcs), list(verts)

    def key(self) -> tuple:
        """Hashable description of the alive structure (ids kept)."""
        c = self._cache.get("key")
        if c is None:
            c = self._cache["key"] = (self.vertices(), tuple(sorted(self.arc_pairs())))
        return c

    def __repr__(self) -> str:
        return f"Digraph(n={self.num_vertices()}, m={self.num_arcs()})"


@dataclass(frozen=True)
class OriginMap:
    """Maps current vertices to the original vertices they stand for.

    Vertices without an entry represent themselves.
    """

    images: Mapping[int, frozenset] = field(default_factory=dict)

    def image(self, v: int) -> frozenset:
        return self.images.get(v, frozenset((v,)))

    def lift(self, vertices: Iterable[int]) -> frozenset:
        out: set[int] = set()
        for v in vertices:
            out |= self.image(v)
        return frozenset(out)

    def is_contracted(self, v: int) -> bool:
        return v in self.images

    def extend(self, x: int, members: Iterable[int]) -> "OriginMap":
        img = dict(self.images)
        merged: set[int] = set()
        for v in members:
            merged |= img.pop(v, frozenset((v,)))
        img[x] = frozenset(merged)
        return OriginMap(img)


# ---- connectivity ------------------------------------------------------

def strong_components(G: Digraph) -> list[frozenset]:
    """Strong components in topological order of the condensation."""
    succ = G._adj()[1]
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[frozenset] = []
    counter = 0
    for root in G.vertices():
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(frozenset(comp))
    comps.reverse()
    return comps


def is_strong(G: Digraph) -> bool:
    return G.num_vertices() >= 1 and len(strong_components(G)) == 1


def bfs_distances(G: Digraph, source, reverse: bool = False, blocked=frozenset()) -> dict[int, int]:
    """Hop distances from a vertex or collection of vertices, avoiding ``blocked``."""
    nbr = G._adj()[2] if reverse else G._adj()[1]
    sources = [source] if isinstance(source, int) else list(source)
    dist = {}
    q = deque()
    for s in sources:
        if G.has_vertex(s) and s not in blocked and s not in dist:
            dist[s] = 0
            q.append(s)
    while q:
        v = q.popleft()
        d = dist[v] + 1
        for w in nbr[v]:
            if w not in dist and w not in blocked:
                dist[w] = d
                q.append(w)
    return dist


def reachable(G: Digraph, sources, blocked=frozenset(), reverse: bool = False) -> set[int]:
    return set(bfs_distances(G, sources, reverse=reverse, blocked=blocked))


def distance(G: Digraph, x: int, y: int):
    """Exact hop distance from x to y, or INF."""
    if not (G.has_vertex(x) and G.has_vertex(y)):
        raise InvalidArgument("distance endpoints must be alive")
    return bfs_distances(G, x).get(y, INF)


def all_distances(G: Digraph) -> dict[int, dict[int, int]]:
    c = G._cache.get("apsp")
    if c is None:
        c = G._cache["apsp"] = {v: bfs_distances(G, v) for v in G.vertices()}
    return c


def shortest_path(G: Digraph, x: int, y: int, blocked=frozenset()) -> list[int] | None:
    """Lexicographically least among the shortest x->y paths, or None."""
    to_y = bfs_distances(G, y, reverse=True, blocked=blocked)
    if x not in to_y:
        return None
    path = [x]
    v = x
    while v != y:
        want = to_y[v] - 1
        v = next(w for w in G.succ(v) if to_y.get(w) == want)
        path.append(v)
    return path


def shortest_path_between_sets(G: Digraph, X, Y, blocked=frozenset()) -> list[int] | None:
    """Lexicographically least shortest path from some vertex of X to some of Y."""
    to_Y = bfs_distances(G, Y, reverse=True, blocked=blocked)
    starts = [x for x in sorted(X) if x in to_Y]
    if not starts:
        return None
    best = min(to_Y[x] for x in starts)
    v = next(x for x in starts if to_Y[x] == best)
    path = [v]
    while to_Y[v] > 0:
        want = to_Y[v] - 1
        v = next(w for w in G.succ(v) if to_Y.get(w) == want)
        path.append(v)
    return path


# ---- constructions -----------------------------------------------------

def contract(G: Digraph, X: Iterable[int], origin: OriginMap | None = None) -> tuple[Digraph, OriginMap]:
    """Contract X to a fresh vertex; arcs inside X vanish, boundary arcs are redirected."""
    X = set(X)
    if not X:
        raise InvalidArgument("cannot contract an empty set")
    if any(not G.has_vertex(v) for v in X):
        raise InvalidArgument("contracted vertices must be alive")
    x = G.n
    tails = list(G.tails)
    heads = list(G.heads)
    arc_alive = list(G.arc_alive)
    for a in range(len(tails)):
        u, v = tails[a], heads[a]
        iu, iv = u in X, v in X
        if iu and iv:
            arc_alive[a] = False
        elif iu:
            tails[a] = x
        elif iv:
            heads[a] = x
    alive = tuple(a and (v not in X) for v, a in enumerate(G.alive)) + (True,)
    H = Digraph._raw(G.n + 1, tuple(tails), tuple(heads), alive, tuple(arc_alive))
    return H, (origin or OriginMap()).extend(x, X)


def long_arcs(G: Digraph, ell: int) -> frozenset[int]:
    """Arcs (u,v) with dist(v,u) >= ell, i.e. on no cycle of length <= ell."""
    out = set()
    back: dict[int, dict[int, int]] = {}
    for a in G.arc_ids():
        u, v = G.arc(a)
        if v not in back:
            back[v] = bfs_distances(G, v)
        if back[v].get(u, INF) >= ell:
            out.add(a)
    return frozenset(out)


def torso(G: Digraph, Z: Iterable[int], A_long: Iterable[int]) -> tuple[Digraph, frozenset[int]]:
    """Torso of G with respect to Z.

    Present arcs of G between non-Z vertices are kept with multiplicity (same
    order); one extra arc is added for each ordered pair joined only through
    Z-internal paths. Loops produced by closed Z-detours are dropped.
    Returns the torso and the arc ids whose witnessing paths can use A_long.
    """
    Z = set(Z)
    A_long = set(A_long)
    out_arcs = G._adj()[3]
    keep = [v for v in G.vertices() if v not in Z]
    tails: list[int] = []
    heads: list[int] = []
    long_flags: list[bool] = []
    direct: set[tuple[int, int]] = set()
    for a in G.arc_ids():
        u, v = G.arc(a)
        if u in Z or v in Z:
            continue
        tails.append(u)
        heads.append(v)
        direct.add((u, v))
        long_flags.append(a in A_long)
    # Z-detours: BFS over (vertex, used-long-arc) states starting from each kept u
    via: dict[tuple[int, int], bool] = {}
    for u in keep:
        seen = set()
        q = deque()
        for a in out_arcs[u]:
            w = G.heads[a]
            if w in Z:
                st = (w, a in A_long)
                if st not in seen:
                    seen.add(st)
                    q.append(st)
        while q:
            z, flag = q.popleft()
            for a in out_arcs[z]:
                w = G.heads[a]
                f = flag or a in A_long
                if w in Z:
                    st = (w, f)
                    if st not in seen:
                        seen.add(st)
                        q.append(st)
                elif w != u:
                    via[(u, w)] = via.get((u, w), False) or f
    U_long: set[int] = set()
    for i in range(len(tails)):
        if long_flags[i] or via.get((tails[i], heads[i]), False):
            U_long.add(i)
    for (u, w) in sorted(via):
        if (u, w) not in direct:
            if via[(u, w)]:
                U_long.add(len(tails))
            tails.append(u)
            heads.append(w)
    alive = tuple(G.alive[v] and v not in Z for v in range(G.n))
    T = Digraph._raw(G.n, tuple(tails), tuple(heads), alive, (True,) * len(tails))
    return T, frozenset(U_long)


def line_digraph(G: Digraph) -> tuple[Digraph, tuple[int, ...]]:
    """Directed line graph; vertex i stands for arc ``arc_of[i]`` of G."""
    arc_of = G.arc_ids()
    pos = {a: i for i, a in enumerate(arc_of)}
    arcs = []
    for a in arc_of:
        for b in G.out_arcs(G.heads[a]):
            arcs.append((pos[a], pos[b]))
    return Digraph(len(arc_of), arcs), arc_of


def vertex_to_arc_reduction(G: Digraph, k: int) -> Digraph:
    """Split v into v- = 2v -> v+ = 2v+1 (arc id v); each arc gets k+1 copies u+ -> v-.

    A cycle of length L maps to a cycle of length 2L.
    """
    arcs = [(2 * v, 2 * v + 1) for v in range(G.n)]
    for u, v in G.arc_pairs():
        arcs.extend([(2 * u + 1, 2 * v)] * (k + 1))
    alive = []
    for a in G.alive:
        alive += [a, a]
    return Digraph(2 * G.n, arcs, alive=alive)


@dataclass(frozen=True)
class MixedGraph:
    """Loop-free mixed graph: directed arcs plus undirected edges."""

    n: int
    arcs: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MixedReduction:
    graph: Digraph
    ell: int
    original_n: int
    # subdivision vertex -> original vertex used when lifting a solution
    attach: Mapping[int, int]

    def lift(self, solution: Iterable[int]) -> frozenset[int]:
        return frozenset(self.attach.get(v, v) for v in solution)


def mixed_fvs_reduction(M: MixedGraph) -> MixedReduction:
    """Mixed feedback vertex set as long cycle hitting with ell = 2.

    Every arc is subdivided once. An edge that is the only connection between
    its endpoints becomes a digon; otherwise it becomes two subdivided arcs,
    one per direction.
    """
    conn: dict[frozenset, int] = {}
    for u, v in list(M.arcs) + list(M.edges):
        if u == v:
            raise InvalidArgument("mixed graph must be loop-free")
        key = frozenset((u, v))
        conn[key] = conn.get(key, 0) + 1
    arcs: list[tuple[int, int]] = []
    attach: dict[int, int] = {}
    nxt = M.n

    def subdivide(u: int, v: int):
        nonlocal nxt
        m = nxt
        nxt += 1
        attach[m] = u
        arcs.append((u, m))
        arcs.append((m, v))

    for u, v in M.arcs:
        subdivide(u, v)
    for u, v in M.edges:
        if conn[frozenset((u, v))] == 1:
            arcs.append((u, v))
            arcs.append((v, u))
        else:
            subdivide(u, v)
            subdivide(v, u)
    return MixedReduction(Digraph(nxt, arcs), 2, M.n, attach)
