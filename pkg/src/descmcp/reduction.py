"""Set cover -> MCP1 reduction.

For elements ``w_1..w_n`` and families ``S_1..S_k`` the reduced autonomous
system has size ``n + k`` (element rows/columns first, then families):

* ``A`` is the full diagonal,
* ``F`` has ``(i, i)`` for every element row and ``(i, n + j)`` whenever
  ``w_i`` belongs to ``S_j``.

Each element pair ``{w_i+, w_i-}`` becomes an s-consistent DM component,
each family pair a consistent component without s-arcs, and the element
component lies below the family component exactly when ``w_i in S_j``.
Minimum input configurations of the reduced system are therefore minimum
set covers.
"""
from __future__ import annotations

from dataclasses import dataclass

from .setcover import InfeasibleError, SetCoverInstance
from .system import DescriptorSystem, StructuralPattern, e, x


@dataclass(frozen=True)
class ReducedSystem:
    sys: DescriptorSystem
    element_rows: tuple  # ((element, row), ...) with 1-based rows
    family_rows: tuple   # ((family id, row), ...)
    source: SetCoverInstance

    def element_row(self, w) -> int:
        return dict(self.element_rows)[w]

    def family_row(self, fid) -> int:
        return dict(self.family_rows)[fid]

    def families_of(self, S) -> list:
        """Family ids for the family rows in ``S`` (equation nodes or row numbers)."""
        by_row = {row: fid for fid, row in self.family_rows}
        rows = {getattr(c, "index", c) for c in S}
        return sorted(by_row[r] for r in rows if r in by_row)

    def pull_back(self, S) -> list:
        """Turn an input configuration into a set cover of the same size.

        Element rows in ``S`` are replaced by some family containing the
        element (the lowest id), which keeps the cover valid.
        """
        by_row = {row: fid for fid, row in self.family_rows}
        elem_by_row = {row: w for w, row in self.element_rows}
        out = set()
        for c in S:
            r = getattr(c, "index", c)
            if r in by_row:
                out.add(by_row[r])
            else:
                w = elem_by_row[r]
                out.add(min(fid for fid, members in self.source.families if w in members))
        return sorted(out)

    def label_map(self) -> dict:
        labels = {}
        for w, row in self.element_rows:
            labels[f"w{w}"] = {"state": str(x(row)), "equation": str(e(row))}
        for fid, row in self.family_rows:
            labels[f"S{fid}"] = {"state": str(x(row)), "equation": str(e(row))}
        return labels


def set_cover_to_descriptor(inst: SetCoverInstance) -> ReducedSystem:
    if not inst.feasible:
        raise InfeasibleError("families do not cover the universe")
    elements = sorted(inst.universe)
    n, k = len(elements), len(inst.families)
    size = n + k
    row_of = {w: i + 1 for i, w in enumerate(elements)}
    A = StructuralPattern.diagonal(size)
    f_entries = {(i, i) for i in range(1, n + 1)}
    for j, (_, members) in enumerate(inst.families, start=1):
        f_entries |= {(row_of[w], n + j) for w in members}
    F = StructuralPattern(size, size, frozenset(f_entries))
    sys = DescriptorSystem(F, A, StructuralPattern.empty(size, 0))
    return ReducedSystem(
        sys, tuple(row_of.items()),
        tuple((fid, n + j) for j, (fid, _) in enumerate(inst.families, start=1)), inst)
