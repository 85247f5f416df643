import numpy as np
import pytest
from hypothesis import given, settings

from conftest import set_covers
from descmcp.controllability import check_structural_controllability
from descmcp.dm import dm_decompose
from descmcp.matching import matching_size
from descmcp.mcp import solve_mcp1_exact
from descmcp.oracles import (OracleLimitError, _cluster_centroids, exhaustive_mcp1,
                             exhaustive_set_cover, numeric_rank_oracle, random_set_cover,
                             random_system)
from descmcp.reduction import set_cover_to_descriptor
from descmcp.setcover import InfeasibleError, SetCoverInstance, exact_set_cover
from descmcp.system import (DescriptorSystem, GraphView, StructuralPattern, build_bipartite, e,
                            serialize_system)

REDUCED_F = {(1, 1), (2, 2), (3, 3), (4, 4), (1, 5), (2, 5), (4, 5), (1, 6), (3, 6), (3, 7),
           (4, 7)}


def test_example_reduction_matrices(example_cover):
    red = set_cover_to_descriptor(example_cover)
    assert red.sys.n == 7 and red.sys.m == 0
    assert red.sys.A.nonzeros == {(i, i) for i in range(1, 8)}
    assert red.sys.F.nonzeros == REDUCED_F
    assert red.label_map()["S1"] == {"state": "x5", "equation": "e5"}


def test_trivial_reduction():
    red = set_cover_to_descriptor(SetCoverInstance.from_lists(1, [{1}]))
    assert red.sys.n == 2
    sol = solve_mcp1_exact(red.sys)
    assert sol.size == 1
    assert red.pull_back(sol.S) == [1]


def test_reduction_rejects_infeasible():
    with pytest.raises(InfeasibleError):
        set_cover_to_descriptor(SetCoverInstance.from_lists(2, [{1}]))


def test_pull_back_maps_family_rows(example_cover):
    red = set_cover_to_descriptor(example_cover)
    S = [e(red.family_row(1)), e(red.family_row(3))]
    assert red.families_of(S) == [1, 3] == red.pull_back(S)
    assert red.pull_back([e(red.element_row(3)), e(red.family_row(1))]) == [1, 2]


@given(set_covers())
def test_reduction_structure(inst):
    red = set_cover_to_descriptor(inst)
    g = build_bipartite(red.sys)
    n = red.sys.n
    assert matching_size(g, GraphView.GA) == n
    dm = dm_decompose(g, GraphView.GAsF)
    elem = {dm.component_of(e(r)) for _, r in red.element_rows}
    assert dm.maximal_s_consistent() == elem
    for fid, members in inst.families:
        fam = dm.component_of(e(red.family_row(fid)))
        assert not dm.component(fam).has_s_arc
        for w in inst.universe:
            assert dm.reaches(fam, dm.component_of(e(red.element_row(w)))) == (w in members)


@settings(max_examples=50)
@given(set_covers())
def test_round_trip_sizes(inst):
    red = set_cover_to_descriptor(inst)
    sol = solve_mcp1_exact(red.sys)
    assert sol.size == len(exact_set_cover(inst))
    assert inst.is_cover(red.pull_back(sol.S))


def test_exhaustive_mcp1_examples(running, example_cover):
    assert exhaustive_mcp1(running) == {e(1)}
    assert len(exhaustive_mcp1(set_cover_to_descriptor(example_cover).sys)) == 2
    diag = DescriptorSystem(StructuralPattern.empty(3, 3), StructuralPattern.diagonal(3),
                            StructuralPattern.empty(3, 0))
    assert exhaustive_mcp1(diag) == set()


def test_exhaustive_guards(running):
    with pytest.raises(OracleLimitError):
        exhaustive_mcp1(random_system(13, 0.1, 0.1, seed=0))
    with pytest.raises(ValueError):
        exhaustive_mcp1(running, size_limit=0)
    with pytest.raises(OracleLimitError):
        numeric_rank_oracle(random_system(51, 0.05, 0.05, seed=0))


def test_numeric_oracle_examples(running_b2, running_b12):
    assert numeric_rank_oracle(running_b12)
    assert not numeric_rank_oracle(running_b2)
    full_a = DescriptorSystem(StructuralPattern.empty(3, 3), StructuralPattern.full(3, 3),
                              StructuralPattern.empty(3, 0))
    assert numeric_rank_oracle(full_a)


def test_numeric_oracle_singular_pencil():
    z = StructuralPattern.empty(2, 2)
    assert not numeric_rank_oracle(DescriptorSystem(z, z, StructuralPattern.full(2, 2)))


def test_cluster_centroids():
    eps = 1e-8
    got = _cluster_centroids([1 + eps, 1 - eps, 5.0])
    assert len(got) == 1 and abs(got[0] - 1) < 1e-12


def test_random_system_examples():
    bare = random_system(3, 0.0, 0.0, seed=4)
    assert len(bare.A) + len(bare.F) == 3
    assert check_structural_controllability(bare).solvable
    full = random_system(5, 1.0, 1.0, seed=4)
    assert full.A == StructuralPattern.full(5, 5) == full.F
    a, b = random_system(6, 0.3, 0.3, seed=9, m=2, density_b=0.5), \
        random_system(6, 0.3, 0.3, seed=9, m=2, density_b=0.5)
    assert serialize_system(a) == serialize_system(b)
    with pytest.raises(ValueError):
        random_system(3, 1.5, 0.0, seed=0)


def test_random_set_cover_feasible():
    for seed in range(20):
        inst = random_set_cover(7, 4, seed)
        assert inst.feasible
        assert exhaustive_set_cover(inst) == len(exact_set_cover(inst))


@pytest.mark.parametrize("seed", range(40))
def test_numeric_agreement_sample(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    m = int(rng.integers(0, 3))
    sys_ = random_system(n, 0.25, 0.25, seed=seed, m=m, density_b=0.4)
    assert check_structural_controllability(sys_).verdict == numeric_rank_oracle(sys_, seed=seed)
