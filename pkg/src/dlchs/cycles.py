"""Exact long-cycle, range-cycle and short-cycle searches."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import InvalidArgument
from .graph import INF, Digraph, bfs_distances


@dataclass(frozen=True)
class CycleWitness:
    """A simple cycle as a closed vertex sequence (first == last), smallest id first."""

    sequence: tuple[int, ...]

    @classmethod
    def from_vertices(cls, verts: Iterable[int]) -> "CycleWitness":
        verts = list(verts)
        i = verts.index(min(verts))
        rot = verts[i:] + verts[:i]
        return cls(tuple(rot + rot[:1]))

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.sequence[:-1]

    @property
    def length(self) -> int:
        return len(self.sequence) - 1

    def validate(self, G: Digraph) -> bool:
        vs = self.vertices
        if len(vs) < 2 or len(set(vs)) != len(vs):
            return False
        return all(G.has_vertex(v) for v in vs) and all(
            G.has_arc(a, b) for a, b in zip(self.sequence, self.sequence[1:])
        )


def _csr(G: Digraph):
    c = G._cache.get("csr")
    if c is None:
        verts, succ, pred = G._adj()[:3]
        indptr, indices = _kernels.to_csr(G.n, succ)
        rindptr, rindices = _kernels.to_csr(G.n, pred)
        alive = np.zeros(G.n, np.bool_)
        alive[list(verts)] = True
        c = G._cache["csr"] = (indptr, indices, rindptr, rindices, alive)
    return c


def _search(G: Digraph, lo: int, hi: int) -> CycleWitness | None:
    if G.num_vertices() <= max(lo, 1) or hi <= lo + 1:
        return None
    out = _kernels.cycle_search(*_csr(G), lo, hi)
    if len(out) == 0:
        return None
    return CycleWitness.from_vertices(int(v) for v in out)


def has_long_cycle(G: Digraph, ell: int) -> CycleWitness | None:
    """A cycle of length > ell, or None certifying cf(G) <= ell."""
    key = ("long", ell)
    if key in G._cache:
        return G._cache[key]
    w = _search(G, max(ell, 1), G.n + 1)
    G._cache[key] = w
    return w


def find_cycle_in_range(G: Digraph, lo: int, hi: int, inclusive_hi: bool = False) -> CycleWitness | None:
    """A cycle with lo < length < hi (or <= hi when ``inclusive_hi``)."""
    if lo >= hi:
        raise InvalidArgument("find_cycle_in_range needs lo < hi")
    top = hi + 1 if inclusive_hi else hi
    return _search(G, max(lo, 1), min(top, G.n + 1))


def circumference(G: Digraph) -> int:
    """Exact length of a longest cycle (0 when acyclic)."""
    c = G._cache.get("cf")
    if c is None:
        c = 0
        while True:
            w = has_long_cycle(G, c)
            if w is None:
                break
            c = w.length
        G._cache["cf"] = c
    return c


def is_solution(G: Digraph, S: Iterable[int], ell: int) -> bool:
    return has_long_cycle(G.remove_vertices(S), ell) is None


def short_cycle_through(
    G: Digraph,
    anchor: int,
    ell: int,
    *,
    through: int | None = None,
    is_arc: bool = False,
) -> CycleWitness | None:
    """Shortest cycle of length <= ell through the anchor vertex or arc.

    With ``through`` the cycle must also visit that vertex. Ties between
    shortest cycles are broken by the lexicographic order of the vertex
    sequence that starts at the anchor.
    """
    if is_arc:
        u, v = G.arc(anchor)
        if not (G.has_vertex(u) and G.has_vertex(v)) or anchor not in G.arc_ids():
            raise InvalidArgument("anchor arc is not present")
        start, forced_next = u, v
    else:
        if not G.has_vertex(anchor):
            raise InvalidArgument("anchor vertex is not alive")
        start, forced_next = anchor, None
    if through is not None and not G.has_vertex(through):
        return None
    back = bfs_distances(G, start, reverse=True)
    to_t = bfs_distances(G, through, reverse=True) if through is not None else None
    best: list[int] | None = None
    for target_len in range(2, ell + 1):
        best = _cycle_of_length(G, start, forced_next, through, target_len, back, to_t)
        if best is not None:
            break
    if best is None:
        return None
    return CycleWitness(tuple(best + best[:1]))


def _cycle_of_length(G, s, forced_next, t, L, back, to_t):
    """Lexicographically first simple cycle s -> ... -> s of exactly L arcs."""
    path = [s]
    on = {s}

    def rec(u: int) -> bool:
        d = len(path)
        if d == L:
            if s in G.succ(u) and (t is None or t in on):
                return True
            return False
        cands = (forced_next,) if (d == 1 and forced_next is not None) else G.succ(u)
        for w in cands:
            if w in on or back.get(w, INF) > L - d:
                continue
            if t is not None and t not in on and w != t:
                # must still reach t and come back within budget
                if to_t.get(w, INF) + back.get(t, INF) > L - d:
                    continue
            path.append(w)
            on.add(w)
            if rec(w):
                return True
            path.pop()
            on.discard(w)
        return False

    if forced_next is not None and not G.has_vertex(forced_next):
        return None
    return list(path) if rec(s) else None
