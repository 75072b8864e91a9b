"""Text format: ``p dlchs <n> <m>`` header, ``a u v`` arcs, ``e u v`` edges, ``c`` comments.

Ids in files are 1-based. ``m`` counts all arc and edge lines.
"""
from __future__ import annotations

from .errors import ParseError
from .graph import Digraph, MixedGraph


def parse_mixed(text: str) -> MixedGraph:
    n = m = None
    arcs: list[tuple[int, int]] = []
    edges: list[tuple[int, int]] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        tag = parts[0]
        if n is None:
            if tag != "p" or len(parts) != 4 or parts[1] != "dlchs":
                raise ParseError(lineno, "expected header 'p dlchs <n> <m>'")
            n, m = _ints(lineno, parts[2:])
            if n < 0 or m < 0:
                raise ParseError(lineno, "negative count in header")
            continue
        if tag not in ("a", "e"):
            raise ParseError(lineno, f"unknown line type {tag!r}")
        if len(parts) != 3:
            raise ParseError(lineno, f"'{tag}' line needs exactly two ids")
        u, v = _ints(lineno, parts[1:])
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(lineno, f"vertex id out of range 1..{n}")
        if u == v:
            raise ParseError(lineno, "self-loops are not allowed")
        (arcs if tag == "a" else edges).append((u - 1, v - 1))
    if n is None:
        raise ParseError(max(last, 1), "missing header")
    if len(arcs) + len(edges) != m:
        raise ParseError(max(last, 1), f"header announces {m} arcs/edges, found {len(arcs) + len(edges)}")
    return MixedGraph(n, tuple(arcs), tuple(edges))


def parse_graph(text: str) -> Digraph:
    M = parse_mixed(text)
    if M.edges:
        # locate the first edge line for the error report
        for lineno, raw in enumerate(text.splitlines(), start=1):
            if raw.strip().startswith("e"):
                raise ParseError(lineno, "undirected edge in a directed graph file")
    return Digraph(M.n, M.arcs)


def read_graph(path) -> Digraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(G: Digraph, comment: str | None = None) -> str:
    """Serialize alive structure; vertices are compacted to 1..n'."""
    H, _ = G.compact()
    lines = []
    if comment:
        lines.append(f"c {comment}")
    pairs = H.arc_pairs()
    lines.append(f"p dlchs {H.n} {len(pairs)}")
    lines += [f"a {u + 1} {v + 1}" for u, v in pairs]
    return "\n".join(lines) + "\n"


def format_mixed(M: MixedGraph) -> str:
    lines = [f"p dlchs {M.n} {len(M.arcs) + len(M.edges)}"]
    lines += [f"a {u + 1} {v + 1}" for u, v in M.arcs]
    lines += [f"e {u + 1} {v + 1}" for u, v in M.edges]
    return "\n".join(lines) + "\n"


def _ints(lineno: int, tokens) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in tokens)
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None
