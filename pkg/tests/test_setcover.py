import pytest
from hypothesis import given

from conftest import set_covers
from descmcp.oracles import exhaustive_set_cover
from descmcp.setcover import (BudgetExceeded, InfeasibleError, SetCoverFormatError,
                              SetCoverInstance, exact_set_cover, exact_set_cover_stats,
                              greedy_set_cover, harmonic, parse_setcover, serialize_setcover)


def test_example_instance(example_cover):
    assert exact_set_cover(example_cover) == [1, 3]
    assert len(greedy_set_cover(example_cover)) == 2


def test_single_family():
    inst = SetCoverInstance.from_lists(3, [{1, 2, 3}])
    assert exact_set_cover(inst) == [1] == greedy_set_cover(inst)


def test_infeasible():
    inst = SetCoverInstance.from_lists(3, [{1, 2}])
    with pytest.raises(InfeasibleError):
        greedy_set_cover(inst)
    with pytest.raises(InfeasibleError):
        exact_set_cover(inst)


def test_bad_instances():
    with pytest.raises(ValueError):
        SetCoverInstance(frozenset({1}), ((1, frozenset({2})),))
    with pytest.raises(ValueError):
        SetCoverInstance(frozenset({1}), ((1, frozenset({1})), (1, frozenset())))


def test_budget_exceeded_carries_greedy():
    fams = [{i, i + 1} for i in range(1, 20)] + [set(range(1, 21, 2))]
    inst = SetCoverInstance.from_lists(20, fams)
    with pytest.raises(BudgetExceeded) as info:
        exact_set_cover(inst, budget=3)
    assert inst.is_cover(info.value.incumbent)


def test_file_round_trip(example_cover):
    text = serialize_setcover(example_cover)
    assert text == "setcover n=4 k=3\n1: 1 2 4\n2: 1 3\n3: 3 4\n"
    assert parse_setcover(text) == example_cover


@pytest.mark.parametrize("text, line", [
    ("cover n=1 k=1\n1: 1\n", 1),
    ("setcover n=2 k=1\n1 1 2\n", 2),
    ("setcover n=2 k=1\n1: 3\n", 2),
    ("setcover n=2 k=2\n1: 1\n1: 2\n", 3),
    ("setcover n=2 k=2\n1: 1\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(SetCoverFormatError) as info:
        parse_setcover(text)
    assert info.value.lineno == line


@given(set_covers(max_elements=8, max_families=8))
def test_exact_matches_exhaustive(inst):
    ids = exact_set_cover(inst)
    assert inst.is_cover(ids)
    assert len(ids) == exhaustive_set_cover(inst)


@given(set_covers(max_elements=8, max_families=8))
def test_greedy_bound(inst):
    ids, greedy, _ = exact_set_cover_stats(inst)
    assert inst.is_cover(greedy)
    biggest = max(len(m) for _, m in inst.families)
    assert len(ids) <= len(greedy) <= harmonic(biggest) * len(ids) + 1e-9
