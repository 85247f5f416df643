"""Minimal controllability problems on structural descriptor systems.

MCP0: fewest input columns (each input may drive many equations).
MCP1: smallest set ``S`` of equation nodes such that one dedicated input per
node of ``S`` makes the system structurally controllable.

Both rest on two facts about a solvable autonomous system:

* inputs must repair the matching deficit of ``G_A``: ``S`` has to contain
  the unmatched equations of *some* maximum matching of ``G_A``;
* every maximal s-consistent DM component ``Gi`` of ``G_A-sF`` must lie
  below the component of some driven equation ``c`` (``Gi <= [c]``), so that
  it is swallowed by ``G0`` once the input is attached.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .controllability import ControllabilityReport, check_structural_controllability
from .dm import dm_decompose
from .matching import _FREE, hopcroft_karp, max_matching, unmatched_right
from .setcover import DEFAULT_BUDGET
from .system import DescriptorSystem, GraphView, Node, StructuralPattern, build_bipartite, e


class UnsolvableError(ValueError):
    """The pencil ``A - sF`` is structurally singular."""


def _require_autonomous(sys: DescriptorSystem) -> None:
    if sys.m:
        raise ValueError(f"expected an autonomous system (m = 0), got m = {sys.m}")
    if len(max_matching(build_bipartite(sys), GraphView.GAsF)) != sys.n:
        raise UnsolvableError("system is not solvable: nu(G_A-sF) < n")


# -- covering structure ------------------------------------------------------

def _cover_index(sys: DescriptorSystem):
    g = build_bipartite(sys)
    dm = dm_decompose(g, GraphView.GAsF)
    targets = sorted(dm.maximal_s_consistent())
    cover = {}
    for q in g.minus_nodes:
        home = dm.component_of(q)
        cover[q] = frozenset(t for t in targets if dm.reaches(home, t))
    return dm, targets, cover


def cover_sets(sys: DescriptorSystem) -> dict:
    """Map each equation node ``c`` to the maximal s-consistent components below ``[c]``.

    Components are :class:`~descmcp.dm.DMComponent` objects of the DM
    decomposition of ``G_A-sF``.
    """
    _require_autonomous(sys)
    dm, _, cover = _cover_index(sys)
    return {c: frozenset(dm.component(t) for t in ids) for c, ids in cover.items()}


def is_input_configuration(sys: DescriptorSystem, S) -> bool:
    S = {c if isinstance(c, Node) else e(int(c)) for c in S}
    for c in S:
        if c.kind != "e" or not 1 <= c.index <= sys.n:
            raise ValueError(f"{c} is not an equation node of the system")
    amended = sys.autonomous().with_diagonal_inputs(c.index for c in S)
    return check_structural_controllability(amended).verdict


# -- MCP0 --------------------------------------------------------------------

@dataclass(frozen=True)
class Mcp0Solution:
    n_d: int
    B: StructuralPattern
    system: DescriptorSystem
    repair: tuple    # per column: equation nodes fixing the G_A matching deficit
    coverage: tuple  # per column: equation nodes reaching s-consistent components
    report: ControllabilityReport

    def to_json(self) -> dict:
        return {
            "problem": "mcp0",
            "nD": self.n_d,
            "certified": True,
            "budgetUsed": 0,
            "B": [[i, j] for i, j in self.B.sorted_entries()],
            "assignment": [
                {"input": f"u{k + 1}",
                 "repair": [str(c) for c in rep],
                 "coverage": [str(c) for c in cov]}
                for k, (rep, cov) in enumerate(zip(self.repair, self.coverage))
            ],
            "checkerReport": self.report.to_json(),
        }


def solve_mcp0(sys: DescriptorSystem) -> Mcp0Solution:
    """Constructive minimum-input solution, ``n_D = max(n - nu(G_A), 1)``."""
    _require_autonomous(sys)
    g = build_bipartite(sys)
    m_a = max_matching(g, GraphView.GA)
    unmatched = sorted(unmatched_right(g, GraphView.GA, m_a), key=lambda v: v.index)
    dm, targets, cover = _cover_index(sys)

    repair = [[c] for c in unmatched] or [[]]
    coverage = [[] for _ in repair]
    covered = set()
    for c in unmatched:
        covered |= cover[c]
    for t in targets:
        if t not in covered:
            rep = min(dm.component(t).minus, key=lambda v: v.index)
            coverage[0].append(rep)
            covered |= cover[rep]
    if not unmatched and not coverage[0] and sys.n:
        coverage[0].append(e(1))

    entries = {(c.index, k + 1) for k, col in enumerate(repair) for c in col}
    entries |= {(c.index, k + 1) for k, col in enumerate(coverage) for c in col}
    B = StructuralPattern(sys.n, len(repair), frozenset(entries))
    amended = sys.with_inputs(B)
    report = check_structural_controllability(amended)
    if not report.verdict:
        raise RuntimeError("internal error: MCP0 construction failed the checker")
    return Mcp0Solution(len(repair), B, amended,
                        tuple(tuple(c) for c in repair),
                        tuple(tuple(c) for c in coverage), report)


# -- MCP1 --------------------------------------------------------------------

@dataclass(frozen=True)
class Mcp1Solution:
    S: frozenset
    certified: bool
    certificate: str
    budget_used: int
    mode: str
    report: ControllabilityReport

    @property
    def size(self) -> int:
        return len(self.S)

    @property
    def empty_support(self) -> bool:
        """True when the autonomous system already passes every condition."""
        return not self.S

    def sorted_S(self) -> list:
        return sorted(self.S, key=lambda v: v.index)

    def to_json(self) -> dict:
        return {
            "problem": "mcp1",
            "mode": self.mode,
            "S": [str(c) for c in self.sorted_S()],
            "size": self.size,
            "emptySupport": self.empty_support,
            "certified": self.certified,
            "certificate": self.certificate,
            "budgetUsed": self.budget_used,
            "checkerReport": self.report.to_json(),
        }


class _Mcp1Search:
    """Shared data for the MCP1 solvers (all indices 0-based equation rows)."""

    def __init__(self, sys: DescriptorSystem):
        self.sys = sys
        self.n = sys.n
        g = build_bipartite(sys)
        self.ga = g.adjacency(GraphView.GA)
        m_a = max_matching(g, GraphView.GA)
        self.deficit = sys.n - len(m_a)
        self.unmatched = sorted(q.index - 1 for q in unmatched_right(g, GraphView.GA, m_a))
        # equations left unmatched by at least one maximum matching of G_A
        dm_a = dm_decompose(g, GraphView.GA, m_a)
        inf = dm_a.infinity
        self.free_rows = sorted(q.index - 1 for q in inf.minus) if inf else []
        self.dm, targets, cover = _cover_index(sys)
        self.targets = targets
        bit = {t: k for k, t in enumerate(targets)}
        self.cover = [sum(1 << bit[t] for t in cover[e(q + 1)]) for q in range(sys.n)]
        self.all_targets = (1 << len(targets)) - 1
        self.coverers = [[q for q in range(sys.n) if self.cover[q] >> k & 1]
                         for k in range(len(targets))]

    def matching_ok(self, rows) -> bool:
        """Can ``G_A`` match every equation outside ``rows``?"""
        rows = set(rows)
        need = self.n - len(rows)
        if need <= 0:
            return True
        adj = [[q for q in qs if q not in rows] for qs in self.ga.adj]
        match_p, _ = hopcroft_karp(adj, self.n)
        return sum(1 for q in match_p if q != _FREE) == need

    def covers(self, rows) -> bool:
        mask = 0
        for q in rows:
            mask |= self.cover[q]
        return mask == self.all_targets

    def feasible(self, rows) -> bool:
        return self.covers(rows) and self.matching_ok(rows)

    def cover_lower_bound(self, mask) -> int:
        n_unc = bin(mask).count("1")
        if not n_unc:
            return 0
        best = max((bin(c & mask).count("1") for c in self.cover), default=0)
        by_size = -(-n_unc // best)
        # targets whose coverer sets are pairwise disjoint need one pick each
        packed = 0
        taken = set()
        for k in range(len(self.targets)):
            if mask >> k & 1 and not taken.intersection(self.coverers[k]):
                taken.update(self.coverers[k])
                packed += 1
        return max(by_size, packed)


def _solution(sys, rows, certified, certificate, used, mode) -> Mcp1Solution:
    S = frozenset(e(q + 1) for q in rows)
    report = check_structural_controllability(
        sys.autonomous().with_diagonal_inputs(c.index for c in S))
    if not report.verdict:
        raise RuntimeError(f"internal error: {mode} MCP1 result failed the checker")
    return Mcp1Solution(S, certified, certificate, used, mode, report)


def _greedy_rows(search: _Mcp1Search) -> list:
    S = list(search.unmatched)
    covered = 0
    for q in S:
        covered |= search.cover[q]
    while covered != search.all_targets:
        in_S = set(S)
        best = max(range(search.n),
                   key=lambda q: (bin(search.cover[q] & ~covered).count("1"), q in in_S, -q))
        if best not in in_S:
            S.append(best)
        covered |= search.cover[best]
    return sorted(S)


def solve_mcp1_greedy(sys: DescriptorSystem) -> Mcp1Solution:
    """Unmatched equations of one maximum matching plus a greedy cover of the targets."""
    _require_autonomous(sys)
    search = _Mcp1Search(sys)
    rows = _greedy_rows(search)
    return _solution(sys, rows, False, "greedy heuristic (no optimality claim)", 0, "greedy")


def solve_mcp1_exact(sys: DescriptorSystem, budget: int = DEFAULT_BUDGET) -> Mcp1Solution:
    """Minimum input configuration by iterative deepening over ``|S|``.

    At depth ``k`` the search branches on which equation covers the lowest
    uncovered maximal s-consistent component; once everything is covered the
    remaining picks are spent on equations that can be left unmatched by
    some maximum matching of ``G_A``.  ``budget`` caps search nodes plus
    feasibility evaluations; when it runs out the greedy incumbent is
    returned with ``certified=False``.
    """
    _require_autonomous(sys)
    search = _Mcp1Search(sys)
    everything = list(range(sys.n))
    if not search.feasible(everything):
        raise RuntimeError("internal error: driving every equation is infeasible")
    greedy = _greedy_rows(search)
    lb = max(search.deficit, search.cover_lower_bound(search.all_targets))
    used = 0

    class _OutOfBudget(Exception):
        pass

    def tick():
        nonlocal used
        used += 1
        if used > budget:
            raise _OutOfBudget

    def fill(S, picks_left):
        tick()
        if search.matching_ok(S):
            return S
        extra_pool = [q for q in search.free_rows if q not in S]
        for r in range(1, picks_left + 1):
            for extra in combinations(extra_pool, r):
                tick()
                if search.matching_ok(S + list(extra)):
                    return S + list(extra)
        return None

    def dfs(S, covered, picks_left):
        tick()
        uncovered = search.all_targets & ~covered
        if not uncovered:
            return fill(S, picks_left)
        if search.cover_lower_bound(uncovered) > picks_left:
            return None
        if search.deficit - sum(1 for q in S if q in free_set) > picks_left:
            return None
        low = (uncovered & -uncovered).bit_length() - 1
        for q in search.coverers[low]:
            if q in S:
                continue
            hit = dfs(S + [q], covered | search.cover[q], picks_left - 1)
            if hit is not None:
                return hit
        return None

    free_set = set(search.free_rows)
    try:
        for k in range(lb, len(greedy)):
            hit = dfs([], 0, k)
            if hit is not None:
                why = (f"size equals lower bound {lb}" if k == lb else
                       f"sizes {lb}..{k - 1} exhausted (lower bound {lb})")
                return _solution(sys, sorted(hit), True, why, used, "exact")
    except _OutOfBudget:
        return _solution(sys, greedy, False,
                         f"budget of {budget} exhausted; greedy incumbent returned",
                         budget, "exact")
    why = (f"greedy size equals lower bound {lb}" if len(greedy) == lb else
           f"greedy size {len(greedy)} is optimal: sizes {lb}..{len(greedy) - 1} exhausted "
           f"(lower bound {lb})")
    return _solution(sys, greedy, True, why, used, "exact")
