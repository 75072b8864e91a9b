"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import json
import subprocess
import sys
from itertools import combinations

import numpy as np
import pytest

from audits import (
    is_simple_path,
    prefix_suffix_counterexample,
    short_cycle_through_two,
    split_labels,
    strong_corpus,
    walk_counterexample,
)
from bounded_cf import audit_graph
from conftest import bidirected_cycle, cycle, theta
from corpus import long_girth_instance
from dlchs import cli
from dlchs.clusters import decompose
from dlchs.cycles import find_cycle_in_range, has_long_cycle
from dlchs.errors import GenerationFailure
from dlchs.generators import fig_cf3, fig_cf4, generate, random_gnp
from dlchs.graph import (
    INF,
    Digraph,
    MixedGraph,
    bfs_distances,
    distance,
    line_digraph,
    long_arcs,
    mixed_fvs_reduction,
    strong_components,
    vertex_to_arc_reduction,
)
from dlchs.io import format_graph
from dlchs.oracle import (
    brute_circumference,
    brute_dlchs,
    brute_mixed_fvs,
    important_separators,
    multiway_cuts,
    representative_counterexample,
    simple_cycles,
    witness_counterexample,
)
from dlchs.pipeline import Instance, SolverStats, minimum_solution, solve
from dlchs.reppaths import (
    closed_walk_family_W,
    closed_walk_family_pair,
    monien_bound,
    prefix_suffix_families,
    rep_paths_bounded_cf,
    rep_short_paths,
)
from dlchs.separators import (
    enumerate_important_separators,
    multiway_cut,
    path_witness_multi,
    path_witness_pair,
    path_witness_single,
    witness_bound,
)

pytestmark = pytest.mark.acceptance


def gnp_corpus(count, n_lo, n_hi, seed, p_lo=0.1, p_hi=0.6):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        yield random_gnp(n, float(rng.uniform(p_lo, p_hi)), rng)


def gadgets():
    out = [theta()]
    out += [cycle(n) for n in range(2, 8)]
    out += [bidirected_cycle(n) for n in range(3, 8)]
    out += [fig_cf3(n).graph for n in (1, 2)]
    out.append(fig_cf4(1).graph)
    return out


# ---- 1. end-to-end oracle equivalence ------------------------------------------------

def test_criterion_1_oracle_equivalence(verdict):
    graphs = list(gnp_corpus(5000, 1, 7, seed=1)) + gadgets()
    stats = SolverStats()
    mismatches = []
    runs = 0
    for gi, G in enumerate(graphs):
        for ell in (1, 2, 3, 4):
            opt = brute_dlchs(G, 3, ell).optimum
            for k in (0, 1, 2, 3):
                runs += 1
                sol = solve(Instance(G, k, ell), stats)
                expect = opt is not None and opt <= k
                if (sol is not None) != expect:
                    mismatches.append(("feasibility", gi, k, ell))
            best = minimum_solution(Instance(G, 3, ell), stats)
            if (best.size if best else None) != opt:
                mismatches.append(("optimum", gi, ell))
    detail = f"{len(graphs)} graphs, {runs} decisions, rescues={stats.rescues}, mismatches={len(mismatches)}"
    verdict("C1 oracle equivalence", not mismatches, detail)
    assert not mismatches, mismatches[:5]


# ---- 2. important separators -----------------------------------------------------------

def test_criterion_2_important_separators(verdict):
    rng = np.random.default_rng(2)
    bad = []
    cases = worst = 0
    for G in gnp_corpus(600, 2, 8, seed=2, p_lo=0.15, p_hi=0.5):
        verts = list(G.vertices())
        X, Y, _ = split_labels(rng, verts, 3)
        if not X or not Y:
            continue
        for p in range(4):
            cases += 1
            got = [s.vertices for s in enumerate_important_separators(G, X, Y, p)]
            ref = important_separators(G, X, Y, p)
            worst = max(worst, len(got))
            if got != ref or len(got) > 4 ** p:
                bad.append((G.arc_pairs(), X, Y, p))
    verdict("C2 important separators", not bad, f"{cases} cases, largest family {worst}")
    assert not bad, bad[:3]


# ---- 3. witness sets -------------------------------------------------------------------

def test_criterion_3_witness_sets(verdict):
    rng = np.random.default_rng(3)
    bad = []
    checks = 0
    for G in gnp_corpus(120, 2, 9, seed=3, p_lo=0.15, p_hi=0.45):
        verts = list(G.vertices())
        for k in (0, 1, 2):
            X, Y = split_labels(rng, verts, 2)
            if X and Y:
                x = min(X)
                Yp = path_witness_single(G, x, Y, k)
                checks += 1
                if not Yp <= Y or len(Yp) > witness_bound(k) or witness_counterexample(G, {x}, Y, {x}, Yp, k):
                    bad.append(("single", G.arc_pairs(), k))
                Xp, Yp = path_witness_pair(G, X, Y, k)
                checks += 1
                if max(len(Xp), len(Yp)) > witness_bound(k) or witness_counterexample(G, X, Y, Xp, Yp, k):
                    bad.append(("pair", G.arc_pairs(), k))
            sets = split_labels(rng, verts, 3)
            if all(sets):
                out = path_witness_multi(G, sets, k)
                bound = 2 * (len(sets) - 1) * witness_bound(k)
                for a, b in ((0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)):
                    checks += 1
                    if len(out[a]) > bound or witness_counterexample(G, sets[a], sets[b], out[a], out[b], k):
                        bad.append(("multi", G.arc_pairs(), k, a, b))
    verdict("C3 witness sets", not bad, f"{checks} exhaustive checks")
    assert not bad, bad[:3]


# ---- 4. representative families ---------------------------------------------------------

def test_criterion_4_representative_families(verdict):
    bad = []
    checks = 0
    for G in gnp_corpus(80, 2, 9, seed=4, p_lo=0.2, p_hi=0.5):
        x, y = 0, G.n - 1
        for k in (0, 1, 2):
            fam = rep_short_paths(G, x, y, k, G.n - 1)
            checks += 1
            if len(fam) > monien_bound(G.n - 1, k) or representative_counterexample(G, x, y, fam.paths, k):
                bad.append(("short", G.arc_pairs(), k))
    for cf in (3, 4):
        for G in strong_corpus(12, 100 * cf, cf):
            vs = G.vertices()
            for x, y in ((vs[0], vs[-1]), (vs[-1], vs[1])):
                for k in (1, 2):
                    fam = rep_paths_bounded_cf(G, x, y, k)
                    checks += 1
                    if not all(is_simple_path(G, P, x, y) for P in fam.paths) or \
                            representative_counterexample(G, x, y, fam.paths, k):
                        bad.append(("bounded-cf", G.arc_pairs(), x, y, k))
    for G in gnp_corpus(30, 2, 8, seed=40, p_lo=0.2, p_hi=0.5):
        s, t = 0, G.n - 1
        for k in (0, 1, 2):
            for d in (1, 2):
                le, gt = prefix_suffix_families(G, s, t, k, d)
                checks += 1
                if prefix_suffix_counterexample(G, s, t, k, d, le, gt) is not None:
                    bad.append(("prefix-suffix", G.arc_pairs(), k, d))
    for G in gnp_corpus(40, 2, 7, seed=41, p_lo=0.25, p_hi=0.55):
        for ell in (2, 3, 4):
            if any(len(c) > ell for c in simple_cycles(G.remove_vertices([0, 1]))):
                continue
            for k in (0, 1, 2):
                fam = closed_walk_family_pair(G, 0, 1, k, ell)
                checks += 1
                if walk_counterexample(G, fam.walks, [(0, 1)], k, ell) is not None:
                    bad.append(("walk-pair", G.arc_pairs(), k, ell))
    for G in gnp_corpus(30, 3, 8, seed=42, p_lo=0.2, p_hi=0.5):
        W = {0, 1, 2}
        for ell in (2, 3):
            if any(len(c) > ell for c in simple_cycles(G.remove_vertices(W))):
                continue
            for k in (0, 1):
                fam = closed_walk_family_W(G, W, k, ell)
                checks += 1
                for r in range(k + 1):
                    for S in combinations(G.vertices(), r):
                        S = set(S)
                        if any(len(c) > ell for c in simple_cycles(G.remove_vertices(S))):
                            continue
                        alive = any(
                            c for c in strong_components(G.remove_vertices(S)) if len(c & W) >= 2
                        )
                        if alive and not short_cycle_through_two(G, S, W, ell) and \
                                all(set(w) & S for w in fam.walks):
                            bad.append(("walk-W", G.arc_pairs(), k, ell, S))
    verdict("C4 representative families", not bad, f"{checks} exhaustive audits")
    assert not bad, bad[:3]


# ---- 5. bounded circumference ------------------------------------------------------------

def test_criterion_5_bounded_circumference(verdict):
    pairs = 0
    seed = 0
    while pairs < 100_000:
        cf = 2 + seed % 3
        try:
            G = generate("bounded-cf-strong", {"n": 5 + seed % 5, "p": 0.35, "cf": cf, "max_tries": 2000}, seed=5000 + seed)
        except GenerationFailure:
            seed += 1
            continue
        pairs += audit_graph(G)
        seed += 1
    tight = []
    for n in range(1, 6):
        g = fig_cf4(n)
        cf = brute_circumference(g.graph, cap=64)
        green, blue, red = (len(g.paths[c]) - 1 for c in ("green", "blue", "red"))
        dist = distance(g.graph, g.x, g.y)
        tight.append(cf == 4 and dist == n and blue == (cf - 1) * green and red == (cf - 1) ** 2 * dist)
    ok = all(tight)
    verdict("C5 bounded-circumference inequalities", ok, f"{pairs} path pairs, fig-cf4 tight for n=1..5: {ok}")
    assert ok


# ---- 6. multiway cut ----------------------------------------------------------------------

def test_criterion_6_multiway_cut(verdict):
    rng = np.random.default_rng(6)
    bad = []
    cases = 0
    for G in gnp_corpus(500, 2, 8, seed=6, p_lo=0.15, p_hi=0.5):
        t = int(rng.integers(2, 4))
        terms = [s for s in split_labels(rng, list(G.vertices()), t) if s]
        if len(terms) < 2:
            continue
        cases += 1
        got = multiway_cut(G, terms, 4)
        ref = multiway_cuts(G, terms, 4)
        if (got is None) != (not ref) or (got is not None and (len(got) != len(ref[0]) or got not in ref)):
            bad.append((G.arc_pairs(), terms))
    verdict("C6 multiway cut", not bad, f"{cases} instances")
    assert not bad, bad[:3]


# ---- 7. reductions --------------------------------------------------------------------------

def reduction_corpus():
    rng = np.random.default_rng(7)
    for _ in range(300):
        n = int(rng.integers(1, 7))
        G = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3])
        if line_digraph(G)[0].num_vertices() <= 12:
            yield G


@pytest.mark.xfail(strict=True, reason="the line digraph turns closed trails into cycles; see README")
def test_criterion_7a_line_digraph(verdict):
    cases = bad = 0
    for G in reduction_corpus():
        L, _ = line_digraph(G)
        for ell in (1, 2, 3):
            cases += 1
            bad += brute_dlchs(G, 3, ell).optimum != brute_dlchs(L, 3, ell, "arc", cap=40).optimum
    verdict("C7a line-digraph equivalence", bad == 0, f"{cases} cases, {bad} mismatches")
    assert bad == 0


def test_criterion_7b_vertex_to_arc(verdict):
    cases = bad = 0
    for G in reduction_corpus():
        for ell in (1, 2, 3):
            cases += 1
            R = vertex_to_arc_reduction(G, 3)
            bad += brute_dlchs(G, 3, ell).optimum != brute_dlchs(R, 3, 2 * ell, "arc", cap=40).optimum
    verdict("C7b vertex-to-arc equivalence", bad == 0, f"{cases} cases, {bad} mismatches")
    assert bad == 0


def test_criterion_7c_mixed(verdict):
    rng = np.random.default_rng(8)
    cases = bad = 0
    for _ in range(400):
        n = int(rng.integers(1, 7))
        arcs, edges = [], []
        for u in range(n):
            for v in range(n):
                r = rng.random()
                if u != v and r < 0.15:
                    arcs.append((u, v))
                elif u < v and r < 0.25:
                    edges.append((u, v))
        M = MixedGraph(n, tuple(arcs), tuple(edges))
        red = mixed_fvs_reduction(M)
        cases += 1
        bad += brute_mixed_fvs(M, n).optimum != brute_dlchs(red.graph, n, 2, cap=64).optimum
    verdict("C7c mixed-FVS equivalence", bad == 0, f"{cases} cases, {bad} mismatches")
    assert bad == 0


# ---- 8. cluster structure -------------------------------------------------------------------

def qualifying(G, t, ell):
    return (
        not long_arcs(G, ell)
        and find_cycle_in_range(G, ell, 2 * ell ** 6, inclusive_hi=True) is None
        and has_long_cycle(G.remove_vertices([t]), ell) is None
    )


def cluster_lemmas(G, t, ell):
    """Gap, partition and crossing checks computed from scratch; returns failure notes."""
    fails = []
    radius, gap = 2 * ell * ell, 2 * ell ** 6 - 2 * ell
    H = G.remove_vertices([t])
    where = {}
    clusters = {}
    for C in strong_components(H):
        GC = G.induced(C)
        portals = [v for v in C if G.degree(v) > GC.degree(v)]
        dist = {v: bfs_distances(GC, v) for v in portals}
        for v in portals:
            for w in portals:
                d = dist[v].get(w, INF)
                if v != w and radius < d < gap:
                    fails.append(("gap", v, w, d))
        balls = {v: frozenset(w for w in portals if dist[v].get(w, INF) <= radius) for v in portals}
        for a in balls.values():
            for b in balls.values():
                if a != b and a & b:
                    fails.append(("partition", a, b))
        for v in portals:
            where[v] = C
            clusters[v] = balls[v]
    dec = decompose(G, t, ell)
    lib = {frozenset(L) for c in dec.components for L in c.clusters}
    if lib != set(clusters.values()):
        fails.append(("decompose disagrees",))
    comp_of = {v: C for C in strong_components(H) for v in C}
    for c in simple_cycles(G, cap=10 ** 9):
        if len(c) <= ell:
            continue
        m = len(c)
        crosses = False
        for i in range(m):
            if c[i] not in clusters:
                continue
            for step in range(1, m):
                u = c[(i + step) % m]
                if comp_of.get(u) != comp_of.get(c[i]):
                    break
                if u in clusters and clusters[u] != clusters[c[i]]:
                    crosses = True
                    break
            if crosses:
                break
        if not crosses:
            fails.append(("crossing", c))
    return fails


def test_criterion_8_cluster_structure(verdict):
    rng = np.random.default_rng(9)
    instances = []
    while len(instances) < 30:
        G, t = long_girth_instance(rng)
        if qualifying(G, t, 2):
            instances.append((G, t, 2))
    rng3 = np.random.default_rng(10)
    for _ in range(2):
        G, t = long_girth_instance(rng3, ell=3, branches=2, pendants=2, triangles=True)
        if qualifying(G, t, 3):
            instances.append((G, t, 3))
    fails = []
    for G, t, ell in instances:
        fails += cluster_lemmas(G, t, ell)
    ell3 = sum(ell == 3 for *_, ell in instances)
    verdict("C8 cluster structure", not fails, f"{len(instances)} qualifying instances ({ell3} with ell=3)")
    assert not fails, fails[:3]


# ---- 9. determinism -----------------------------------------------------------------------------

def test_criterion_9_determinism(tmp_path, verdict):
    files = []
    for i, G in enumerate(gnp_corpus(40, 1, 7, seed=11)):
        path = tmp_path / f"g{i}.txt"
        path.write_text(format_graph(G))
        files.append(path)

    def sweep():
        out = []
        for path in files:
            for ell in (1, 2, 3):
                cfg = cli.RunConfig(str(path), 2, ell, engine="both", seed=3, json=True)
                _, report = cli.run(cfg)
                out.append(cli.render(report, True))
        return "\n".join(out)

    first, second = sweep(), sweep()
    argv = [sys.executable, "-m", "dlchs", "--input", str(files[-1]), "--k", "2", "--ell", "2",
            "--engine", "both", "--seed", "3", "--json"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    agree = all(json.loads(line)["agreement"] for line in first.splitlines())
    ok = first == second and runs[0] == runs[1] and agree
    verdict("C9 determinism", ok, f"{len(first.splitlines())} JSON reports twice plus two CLI processes")
    assert ok
