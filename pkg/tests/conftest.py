import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from descmcp.setcover import SetCoverInstance
from descmcp.system import DescriptorSystem, StructuralPattern

settings.register_profile(
    "repro", derandomize=True, deadline=None, print_blob=True,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("random", deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

F_RUN = [[1, 0, 0], [1, 1, 1], [0, 0, 0]]
A_RUN = [[1, 0, 0], [1, 0, 0], [0, 0, 1]]


@pytest.fixture
def running():
    """The three-state running example (autonomous)."""
    return DescriptorSystem.from_patterns(F_RUN, A_RUN)


@pytest.fixture
def running_b2():
    return DescriptorSystem.from_patterns(F_RUN, A_RUN, [[0], [1], [0]])


@pytest.fixture
def running_b12():
    return DescriptorSystem.from_patterns(F_RUN, A_RUN, [[1], [1], [0]])


@pytest.fixture
def example_cover():
    return SetCoverInstance.from_lists(4, [{1, 2, 4}, {1, 3}, {3, 4}])


@st.composite
def patterns(draw, rows, cols, max_density=0.5):
    cells = [(i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)]
    chosen = draw(st.lists(st.sampled_from(cells), unique=True,
                           max_size=int(len(cells) * max_density) + 1)) if cells else []
    return StructuralPattern(rows, cols, frozenset(chosen))


@st.composite
def systems(draw, max_n=5, max_m=2, solvable=False):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    F = draw(patterns(n, n))
    A = draw(patterns(n, n))
    B = draw(patterns(n, m))
    if solvable:
        perm = draw(st.permutations(range(1, n + 1)))
        to_a = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        a, f = set(A.nonzeros), set(F.nonzeros)
        for i, (j, flag) in enumerate(zip(perm, to_a), start=1):
            (a if flag else f).add((i, j))
        A, F = StructuralPattern(n, n, frozenset(a)), StructuralPattern(n, n, frozenset(f))
    return DescriptorSystem(F, A, B)


@st.composite
def set_covers(draw, max_elements=6, max_families=5):
    n = draw(st.integers(1, max_elements))
    k = draw(st.integers(1, max_families))
    fams = draw(st.lists(st.sets(st.integers(1, n)), min_size=k, max_size=k))
    # every element lands somewhere
    for w in range(1, n + 1):
        if not any(w in f for f in fams):
            fams[draw(st.integers(0, k - 1))].add(w)
    return SetCoverInstance.from_lists(n, fams)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
