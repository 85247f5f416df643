import pytest
from hypothesis import given, settings

from conftest import systems
from descmcp.controllability import check_structural_controllability
from descmcp.matching import matching_size
from descmcp.mcp import (UnsolvableError, cover_sets, is_input_configuration, solve_mcp0,
                         solve_mcp1_exact, solve_mcp1_greedy)
from descmcp.oracles import brute_force_mcp0, exhaustive_mcp1
from descmcp.reduction import set_cover_to_descriptor
from descmcp.system import DescriptorSystem, GraphView, StructuralPattern, build_bipartite, e, x


def _diag_only(n):
    return DescriptorSystem(StructuralPattern.empty(n, n), StructuralPattern.diagonal(n),
                            StructuralPattern.empty(n, 0))


def test_mcp0_running_example(running):
    sol = solve_mcp0(running)
    assert sol.n_d == 1
    assert {i for i, _ in sol.B.nonzeros} == {1, 2}
    assert sol.repair == ((e(2),),) and sol.coverage == ((e(1),),)
    assert sol.report.verdict
    assert sol.to_json()["B"] == [[1, 1], [2, 1]]


@pytest.mark.parametrize("n", [1, 3, 6])
def test_mcp0_floor(n):
    sol = solve_mcp0(_diag_only(n))
    assert sol.n_d == 1 and sol.B.nonzeros == {(1, 1)}


def test_mcp0_rejects_inputs_and_unsolvable(running_b2):
    with pytest.raises(ValueError):
        solve_mcp0(running_b2)
    z = StructuralPattern.empty(2, 2)
    with pytest.raises(UnsolvableError):
        solve_mcp0(DescriptorSystem(z, z, StructuralPattern.empty(2, 0)))


def test_cover_sets_running_example(running):
    cov = cover_sets(running)
    assert [c.nodes for c in cov[e(1)]] == [{e(1), x(1)}]
    assert cov[e(2)] == set() and cov[e(3)] == set()


def test_cover_sets_reduction(example_cover):
    red = set_cover_to_descriptor(example_cover)
    cov = cover_sets(red.sys)
    elems = lambda fid: {red.element_row(w) for w in example_cover.family(fid)}
    for fid in (1, 2, 3):
        got = {c.minus for c in cov[e(red.family_row(fid))]}
        assert got == {frozenset({e(r)}) for r in elems(fid)}
    for w in range(1, 5):
        r = red.element_row(w)
        assert {c.minus for c in cov[e(r)]} == {frozenset({e(r)})}


def test_cover_sets_without_s_arcs():
    assert all(not v for v in cover_sets(_diag_only(3)).values())


def test_input_configurations(running, example_cover):
    red = set_cover_to_descriptor(example_cover)
    assert is_input_configuration(red.sys, [e(red.family_row(1)), e(red.family_row(3))])
    assert not is_input_configuration(running, [e(2)])
    assert is_input_configuration(running, [e(1)])
    with pytest.raises(ValueError):
        is_input_configuration(running, [x(1)])


def test_mcp1_running_example(running):
    # x1-e2, x3-e3 is a maximum matching of G_A leaving e1 free, so e1 alone
    # both repairs the deficit and covers {e1,x1}
    exact = solve_mcp1_exact(running)
    assert exact.S == {e(1)} and exact.certified
    greedy = solve_mcp1_greedy(running)
    assert greedy.S == {e(1), e(2)} and not greedy.certified


def test_mcp1_empty_support():
    sol = solve_mcp1_exact(_diag_only(4))
    assert sol.S == set() and sol.empty_support and sol.certified
    assert solve_mcp1_greedy(_diag_only(4)).S == set()
    assert sol.to_json()["emptySupport"] is True


def test_mcp1_reduction(example_cover):
    red = set_cover_to_descriptor(example_cover)
    exact = solve_mcp1_exact(red.sys)
    assert exact.size == 2 and exact.certified
    assert example_cover.is_cover(red.pull_back(exact.S))
    assert solve_mcp1_greedy(red.sys).size == 2


def test_mcp1_budget_returns_incumbent():
    from descmcp.setcover import SetCoverInstance
    # greedy takes {1,2,4,5} first and needs three families; two suffice
    trap = SetCoverInstance.from_lists(6, [{1, 2, 3}, {4, 5, 6}, {1, 2, 4, 5}])
    sys_ = set_cover_to_descriptor(trap).sys
    sol = solve_mcp1_exact(sys_, budget=1)
    assert not sol.certified and "budget" in sol.certificate
    assert sol.size == 3 and sol.report.verdict
    full = solve_mcp1_exact(sys_)
    assert full.certified and full.size == 2


@settings(max_examples=60)
@given(systems(max_n=7, max_m=0, solvable=True))
def test_mcp_self_certification(sys_):
    sol0 = solve_mcp0(sys_)
    g = build_bipartite(sys_)
    assert sol0.n_d == max(sys_.n - matching_size(g, GraphView.GA), 1)
    assert check_structural_controllability(sol0.system).verdict
    exact, greedy = solve_mcp1_exact(sys_), solve_mcp1_greedy(sys_)
    for sol in (exact, greedy):
        assert is_input_configuration(sys_, sol.S)
    assert exact.size <= greedy.size
    assert is_input_configuration(sys_, [e(i) for i in range(1, sys_.n + 1)])


@settings(max_examples=40)
@given(systems(max_n=6, max_m=0, solvable=True))
def test_mcp1_exact_matches_exhaustive(sys_):
    assert solve_mcp1_exact(sys_).size == len(exhaustive_mcp1(sys_))


@settings(max_examples=40)
@given(systems(max_n=5, max_m=0, solvable=True))
def test_mcp0_matches_brute_force(sys_):
    assert solve_mcp0(sys_).n_d == brute_force_mcp0(sys_)
