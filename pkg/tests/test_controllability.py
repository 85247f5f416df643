from hypothesis import given, strategies as st

from conftest import systems
from descmcp.controllability import check_structural_controllability, explain, is_solvable
from descmcp.dm import dm_decompose
from descmcp.matching import matching_size
from descmcp.system import (DescriptorSystem, GraphView, StructuralPattern, build_bipartite, e,
                            x)


def test_running_example_solvable(running):
    assert is_solvable(running)


def test_zero_pencil_unsolvable():
    z = StructuralPattern.empty(2, 2)
    assert not is_solvable(DescriptorSystem(z, z, StructuralPattern.empty(2, 0)))


def test_condition_three_failure(running_b2):
    rep = check_structural_controllability(running_b2)
    assert rep.solvable and rep.matching_ok and not rep.s_arc_ok and not rep.verdict
    assert [c.nodes for c in rep.bad_components] == [{e(1), x(1)}]
    doc = rep.to_json()
    assert doc["badComponents"] == [{"plus": ["x1"], "minus": ["e1"], "sArcs": [["x1", "e1"]]}]
    text = explain(rep)
    assert "condition 3" in text and "{e1,x1}" in text


def test_controllable_configuration(running_b12):
    rep = check_structural_controllability(running_b12)
    assert rep.verdict and rep.bad_components == ()
    assert explain(rep).startswith("structurally controllable")


def test_shared_input_on_decoupled_scalars():
    sys_ = DescriptorSystem.from_patterns([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1], [1]])
    assert check_structural_controllability(sys_).verdict


def test_unsolvable_report():
    z = StructuralPattern.empty(2, 2)
    rep = check_structural_controllability(DescriptorSystem(z, z, StructuralPattern.full(2, 2)))
    assert not rep.solvable and not rep.verdict
    assert "solvability" in explain(rep)


def test_no_input_degenerate_pass():
    sys_ = DescriptorSystem.from_patterns([[0, 0], [0, 0]], [[1, 0], [0, 1]])
    assert check_structural_controllability(sys_).verdict


@given(systems(max_n=6, max_m=2))
def test_verdict_is_conjunction(sys_):
    rep = check_structural_controllability(sys_)
    g = build_bipartite(sys_)
    assert rep.solvable == (matching_size(g, GraphView.GAsF) == sys_.n)
    assert rep.matching_ok == (matching_size(g, GraphView.GAB) == sys_.n)
    assert rep.s_arc_ok == (not rep.bad_components)
    assert rep.verdict == (rep.solvable and rep.matching_ok and rep.s_arc_ok)


@given(systems(max_n=6, max_m=2), st.data())
def test_monotone_in_b(sys_, data):
    if sys_.m == 0:
        return
    before = check_structural_controllability(sys_).verdict
    cells = [(i, j) for i in range(1, sys_.n + 1) for j in range(1, sys_.m + 1)]
    extra = data.draw(st.sets(st.sampled_from(cells)))
    B = StructuralPattern(sys_.n, sys_.m, sys_.B.nonzeros | frozenset(extra))
    after = check_structural_controllability(sys_.with_inputs(B)).verdict
    assert after or not before


@given(systems(max_n=6, max_m=0, solvable=True))
def test_autonomous_characterisation(sys_):
    rep = check_structural_controllability(sys_)
    g = build_bipartite(sys_)
    expected = (matching_size(g, GraphView.GA) == sys_.n
                and not dm_decompose(g, GraphView.GAsF).s_consistent_components())
    assert rep.verdict == expected
