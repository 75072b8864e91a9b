import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bidirected_cycle, cycle, digraphs, random_digraphs
from dlchs.cycles import find_cycle_in_range, has_long_cycle, is_solution
from dlchs.errors import InternalError, InvalidArgument
from dlchs.graph import Digraph, MixedGraph, contract
from dlchs.oracle import brute_dlchs, brute_mixed_fvs, is_mixed_fvs, verify_solution
from dlchs.pipeline import (
    BranchNode,
    HittingSeparatorSubproblem,
    Instance,
    SolverStats,
    compression_step,
    eliminate_medium_cycles,
    hitting_separator_dispatch,
    isolate_branching,
    isolating_intersection_candidates,
    lift_solution,
    minimum_solution,
    solve,
    solve_mixed,
)
from dlchs.pipeline import _Search


# ---- solve -------------------------------------------------------------------------

def test_c5_single_deletion(c5):
    sol = solve(Instance(c5, 1, 4))
    assert sol.verified and sol.size == 1
    assert is_solution(c5, sol.vertices, 4)


def test_c5_nothing_to_delete(c5):
    assert solve(Instance(c5, 0, 5)).vertices == frozenset()


def test_c5_budget_too_small(c5):
    assert solve(Instance(c5, 0, 4)) is None


def test_instance_validation(c5):
    with pytest.raises(InvalidArgument):
        Instance(c5, -1, 2)
    with pytest.raises(InvalidArgument):
        Instance(c5, 1, 0)
    with pytest.raises(InvalidArgument):
        Instance(c5, 1, 2, "edge")


@pytest.mark.parametrize("seed", range(3))
def test_minimum_solution_matches_oracle(seed):
    for G in random_digraphs(60, 6, 100 + seed):
        for ell in (1, 2, 3):
            opt = brute_dlchs(G, 3, ell).optimum
            stats = SolverStats()
            sol = minimum_solution(Instance(G, 3, ell, seed=seed), stats)
            assert (sol is None) == (opt is None)
            if sol is not None:
                assert sol.size == opt
                assert verify_solution(G, sol.vertices, ell)


@pytest.mark.parametrize("seed", range(2))
def test_arc_mode_matches_oracle(seed):
    for G in random_digraphs(40, 5, 200 + seed, 0.2, 0.5):
        for ell in (1, 2, 3):
            opt = brute_dlchs(G, 3, ell, "arc", cap=20).optimum
            sol = minimum_solution(Instance(G, 3, ell, "arc"))
            assert (sol is None) == (opt is None)
            if sol is not None:
                assert sol.size == opt
                assert has_long_cycle(G.remove_arcs(sol.vertices), ell) is None


def test_arc_mode_two_digons_sharing_a_vertex():
    # the line digraph has a long closed trail here but G has no long cycle
    G = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    stats = SolverStats()
    assert solve(Instance(G, 0, 3, "arc"), stats).vertices == frozenset()


def test_arc_fallback_counts():
    G = Digraph(5, [(0, 4), (1, 4), (3, 0), (4, 1), (4, 3)])
    stats = SolverStats()
    sol = minimum_solution(Instance(G, 2, 3, "arc"), stats)
    assert sol.size == brute_dlchs(G, 2, 3, "arc").optimum
    assert stats.arc_fallbacks >= 1


def test_mixed_matches_oracle():
    for G in random_digraphs(40, 5, 300, 0.1, 0.4):
        pairs = G.arc_pairs()
        M = MixedGraph(G.n, tuple(pairs[::2]), tuple(pairs[1::2]))
        opt = brute_mixed_fvs(M, M.n).optimum
        sol = solve_mixed(M, opt)
        assert sol is not None and len(sol) <= opt and is_mixed_fvs(M, sol)
        if opt > 0:
            assert solve_mixed(M, opt - 1) is None


def test_safety_net_rescues_missed_instance():
    arcs = [(0, 2), (0, 3), (0, 5), (0, 6), (1, 0), (1, 2), (1, 3), (1, 5), (1, 6), (2, 0), (2, 1),
            (2, 5), (2, 6), (3, 0), (3, 1), (3, 2), (3, 5), (4, 0), (4, 1), (4, 3), (4, 5), (4, 6), (5, 1)]
    G = Digraph(7, arcs)
    stats = SolverStats()
    sol = minimum_solution(Instance(G, 3, 1), stats)
    assert stats.rescues >= 1
    assert sol.size == brute_dlchs(G, 3, 1).optimum == 2


def test_disjoint_search_gap_with_one_long_cycle_bound():
    # vertex 1 alone hits every cycle of length >= 2, but branching disjoint from T misses it
    G = Digraph(5, [(1, 2), (2, 1), (1, 4), (4, 1), (2, 4), (4, 3)]).remove_vertices([0])
    assert is_solution(G, {1}, 1)
    assert _Search(1, 0, SolverStats()).disjoint_solve(G, 1, frozenset({2, 3, 4})) is None


@given(digraphs(max_n=5), st.integers(1, 3), st.integers(0, 2))
def test_solutions_always_verify(G, ell, k):
    sol = solve(Instance(G, k, ell))
    opt = brute_dlchs(G, k, ell).optimum
    assert (sol is None) == (opt is None)
    if sol is not None:
        assert sol.size <= k and verify_solution(G, sol.vertices, ell)


def test_determinism_under_fixed_seed():
    for G in random_digraphs(20, 6, 7):
        a = minimum_solution(Instance(G, 3, 2, seed=5))
        b = minimum_solution(Instance(G, 3, 2, seed=5))
        assert a == b


# ---- compression ---------------------------------------------------------------------

def test_compression_with_redundant_t(c5):
    assert compression_step(c5, {0, 1}, 1, 5) == frozenset()


def test_compression_precondition(c5):
    with pytest.raises(InvalidArgument):
        compression_step(c5, set(), 0, 3)


def test_compression_digon_with_pendant():
    # digon 0<->1 with pendant cycle 1 -> 2 -> 3 -> 1
    G = Digraph(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)])
    S = compression_step(G, {0, 2}, 1, 1)
    assert S is not None and len(S) == 1 and is_solution(G, S, 1)
    assert brute_dlchs(G, 1, 1).optimum == 1


def test_compression_infeasible():
    # two vertex-disjoint triangles cannot be hit by one vertex
    G = Digraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert brute_dlchs(G, 1, 2).optimum is None
    assert compression_step(G, {0, 3}, 1, 2) is None


def test_compression_runs_isolating_stage():
    G = bidirected_cycle(130)
    stats = SolverStats()
    S = compression_step(G, {0, 65}, 1, 2, stats=stats)
    assert S is not None and len(S) == 1 and is_solution(G, S, 2)
    assert stats.ii_calls >= 1
    assert stats.rescues == 0


# ---- isolation branching ---------------------------------------------------------------

def test_isolate_single_terminal_pass_through(c5):
    nodes = isolate_branching(c5, 1, 2, {0})
    assert len(nodes) == 1 and nodes[0].tag == "pass-through"


def test_isolate_short_cycle_two_terminals():
    # terminals 0 and 1 on a triangle: delete the non-terminal or contract
    G = cycle(3)
    nodes = isolate_branching(G, 1, 3, {0, 1})
    assert [n.tag for n in nodes] == ["pass-through", "short-T-cycle-keep-contract", "short-T-cycle"]
    contracted = nodes[1]
    assert contracted.graph.num_vertices() == 1 and len(contracted.T) == 1
    assert nodes[2].forced == frozenset({2}) and nodes[2].k == 0


@pytest.mark.parametrize("seed", range(2))
def test_branch_accounting(seed):
    for G in random_digraphs(30, 6, 400 + seed):
        ell = 2
        S = brute_dlchs(G, G.n, ell).optimum
        if not S:
            continue
        T = frozenset(G.vertices()[: min(3, G.n)])
        if has_long_cycle(G.remove_vertices(T), ell) is not None:
            continue
        for node in isolate_branching(G, 2, ell, T, seed):
            assert node.k_dec + node.t_dec <= 2 + len(T)
            assert len(node.forced) + node.k == 2


def test_branch_node_rejects_bad_bookkeeping(c5):
    with pytest.raises(InternalError):
        BranchNode(c5, 1, frozenset(), forced=frozenset({0}), k0=1)
    node = BranchNode(c5, 1, frozenset({0}))
    with pytest.raises(InternalError):
        node.delete(0, "x")


# ---- medium cycles ---------------------------------------------------------------------

def test_no_medium_cycle_is_unchanged(c5):
    node = BranchNode(c5, 1, frozenset())
    assert eliminate_medium_cycles(node, 5) == [node]


def test_medium_cycle_branches_per_vertex():
    node = BranchNode(cycle(4), 1, frozenset())
    leaves = eliminate_medium_cycles(node, 3)
    assert sorted(next(iter(n.forced)) for n in leaves) == [0, 1, 2, 3]


def test_medium_cycle_without_budget_is_pruned():
    assert eliminate_medium_cycles(BranchNode(cycle(4), 0, frozenset()), 3) == []


@pytest.mark.parametrize("seed", range(2))
def test_medium_leaves_are_clean(seed):
    for G in random_digraphs(30, 6, 500 + seed):
        for leaf in eliminate_medium_cycles(BranchNode(G, 2, frozenset()), 2):
            assert find_cycle_in_range(leaf.graph, 2, 2 * 2 ** 6) is None


# ---- isolating intersection ------------------------------------------------------------

def test_candidates_empty_when_solved(c5):
    assert isolating_intersection_candidates(c5, 1, 5, {0}) == frozenset()


def test_candidates_cover_single_terminal(c5):
    cands = isolating_intersection_candidates(c5, 1, 4, {0})
    assert cands & {1, 2, 3, 4}


def test_dispatch_trivial_components_returns_guard_sets():
    G = Digraph(3, [(0, 1), (1, 0), (0, 2), (2, 0)])
    sub = HittingSeparatorSubproblem(G, 1, 2, 0, frozenset(), frozenset())
    sub.check()
    assert hitting_separator_dispatch(sub) == frozenset()


def test_dispatch_bottleneck():
    # t = 0 in digons with 1 and 2; 1 <-> 3 <-> 2 with V_out = {2}: 3 separates 1 from V_out
    G = Digraph(4, [(0, 1), (1, 0), (1, 3), (3, 1), (3, 2), (2, 3)])
    sub = HittingSeparatorSubproblem(G, 1, 2, 0, frozenset(), frozenset({3}))
    sub.check()
    assert 3 in hitting_separator_dispatch(sub) or 1 in hitting_separator_dispatch(sub)


def test_subproblem_check_rejects_long_arcs(c5):
    with pytest.raises(InvalidArgument):
        HittingSeparatorSubproblem(c5, 1, 2, 0, frozenset(), frozenset()).check()


# ---- lifting ---------------------------------------------------------------------------

def test_lift_identity(c5):
    node = BranchNode(c5, 1, frozenset())
    assert lift_solution(node, {2}) == frozenset({2})


def test_lift_with_contraction_and_forced():
    G = Digraph(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 1)])
    H, origin = contract(G.remove_vertices([3]), {0, 1})
    node = BranchNode(H, 0, frozenset({4}), frozenset({3}), origin, k0=1)
    assert lift_solution(node, {2}) == frozenset({2, 3})
    with pytest.raises(InternalError):
        lift_solution(node, {4})
