"""Hot cycle-search kernel, compiled with numba when available.

Set ``DLCHS_NO_NUMBA=1`` to run the same source as plain Python over numpy
arrays (the reference fallback used by the benchmark and the parity tests).
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("DLCHS_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:  # pragma: no cover - depends on the environment
    if _DISABLED:
        raise ImportError
    import numba

    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover
    numba = None
    NUMBA_ENABLED = False


def _maybe_jit(fn):
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def _cycle_search_py(indptr, indices, rindptr, rindices, alive, lo, hi):
    """First simple cycle with lo < length < hi, as a vertex array (empty if none).

    Cycles are searched from their smallest vertex s, restricted to vertices
    >= s that lie in the strong component of s within that range.
    """
    n = alive.shape[0]
    path = np.zeros(n, np.int64)
    pos = np.zeros(n, np.int64)
    on = np.zeros(n, np.bool_)
    fwd = np.zeros(n, np.bool_)
    allowed = np.zeros(n, np.bool_)
    queue = np.zeros(n, np.int64)
    for s in range(n):
        if not alive[s]:
            continue
        for i in range(n):
            fwd[i] = False
            allowed[i] = False
        fwd[s] = True
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if w > s and not fwd[w]:
                    fwd[w] = True
                    queue[tail] = w
                    tail += 1
        allowed[s] = True
        count = 1
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(rindptr[u], rindptr[u + 1]):
                w = rindices[e]
                if fwd[w] and not allowed[w]:
                    allowed[w] = True
                    count += 1
                    queue[tail] = w
                    tail += 1
        if count <= lo:
            continue
        path[0] = s
        on[s] = True
        pos[0] = indptr[s]
        depth = 1
        while depth > 0:
            u = path[depth - 1]
            if pos[depth - 1] < indptr[u + 1]:
                w = indices[pos[depth - 1]]
                pos[depth - 1] += 1
                if w == s:
                    if depth > lo and depth < hi:
                        out = np.zeros(depth, np.int64)
                        for i in range(depth):
                            out[i] = path[i]
                        return out
                    continue
                if on[w] or not allowed[w] or depth + 1 >= hi:
                    continue
                path[depth] = w
                on[w] = True
                pos[depth] = indptr[w]
                depth += 1
            else:
                on[u] = False
                depth -= 1
    return np.zeros(0, np.int64)


cycle_search = _maybe_jit(_cycle_search_py)


def to_csr(n: int, succ) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(n + 1, np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(succ[v])
    indices = np.zeros(int(indptr[n]), np.int64)
    i = 0
    for v in range(n):
        for w in succ[v]:
            indices[i] = w
            i += 1
    return indptr, indices
