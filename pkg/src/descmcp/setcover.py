"""Unweighted set cover: instances, file format, greedy and exact solvers."""
from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_BUDGET = 10**7


class InfeasibleError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Search stopped early; ``incumbent`` is the best solution known so far."""

    def __init__(self, incumbent, used):
        super().__init__(f"budget exhausted after {used} expansions")
        self.incumbent = incumbent
        self.used = used


@dataclass(frozen=True)
class SetCoverInstance:
    universe: frozenset
    families: tuple  # ((family id, frozenset of elements), ...)

    def __post_init__(self):
        ids = [fid for fid, _ in self.families]
        if len(set(ids)) != len(ids):
            raise ValueError("family ids must be unique")
        for fid, members in self.families:
            extra = set(members) - set(self.universe)
            if extra:
                raise ValueError(f"family {fid} holds elements outside the universe: "
                                 f"{sorted(extra)}")

    @classmethod
    def from_lists(cls, n_elements: int, families) -> "SetCoverInstance":
        """Elements ``1..n_elements``; families numbered ``1..k`` in the given order."""
        return cls(frozenset(range(1, n_elements + 1)),
                   tuple((k + 1, frozenset(f)) for k, f in enumerate(families)))

    @property
    def feasible(self) -> bool:
        covered = set()
        for _, members in self.families:
            covered |= members
        return covered >= self.universe

    def family(self, fid):
        for k, members in self.families:
            if k == fid:
                return members
        raise KeyError(fid)

    def is_cover(self, ids) -> bool:
        covered = set()
        for fid in ids:
            covered |= self.family(fid)
        return covered >= self.universe


class SetCoverFormatError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_setcover(text: str) -> SetCoverInstance:
    header = None
    families = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            fields = dict(p.partition("=")[::2] for p in parts[1:])
            if (parts[0] != "setcover" or set(fields) != {"n", "k"}
                    or not all(v.isdigit() for v in fields.values())):
                raise SetCoverFormatError(lineno, "expected header 'setcover n=<int> k=<int>'")
            header = (int(fields["n"]), int(fields["k"]))
            continue
        fid, sep, rest = line.partition(":")
        if not sep or not fid.strip().isdigit():
            raise SetCoverFormatError(lineno, f"expected '<id>: <elements>', got {line!r}")
        elems = rest.split()
        if not all(t.isdigit() for t in elems):
            raise SetCoverFormatError(lineno, "element indices must be positive integers")
        members = [int(t) for t in elems]
        bad = [w for w in members if not 1 <= w <= header[0]]
        if bad:
            raise SetCoverFormatError(lineno, f"element {bad[0]} out of range 1..{header[0]}")
        if int(fid) in {f for f, _ in families}:
            raise SetCoverFormatError(lineno, f"duplicate family id {fid.strip()}")
        families.append((int(fid), frozenset(members)))
    if header is None:
        raise SetCoverFormatError(1, "missing 'setcover' header")
    if len(families) != header[1]:
        raise SetCoverFormatError(
            len(text.splitlines()), f"header announces {header[1]} families, found {len(families)}")
    return SetCoverInstance(frozenset(range(1, header[0] + 1)), tuple(families))


def serialize_setcover(inst: SetCoverInstance) -> str:
    out = [f"setcover n={len(inst.universe)} k={len(inst.families)}"]
    for fid, members in inst.families:
        out.append(f"{fid}: " + " ".join(str(w) for w in sorted(members)))
    return "\n".join(out) + "\n"


def greedy_set_cover(inst: SetCoverInstance) -> list:
    """Classic greedy: take the family covering most uncovered elements (lowest id on ties)."""
    if not inst.feasible:
        raise InfeasibleError("families do not cover the universe")
    uncovered = set(inst.universe)
    chosen = []
    while uncovered:
        best = max(inst.families, key=lambda f: (len(f[1] & uncovered), -f[0]))
        chosen.append(best[0])
        uncovered -= best[1]
    return sorted(chosen)


def harmonic(k: int) -> float:
    return sum(1.0 / i for i in range(1, k + 1))


def _lower_bound(uncovered_mask, masks, n_uncovered):
    biggest = max((bin(m & uncovered_mask).count("1") for m in masks), default=0)
    if biggest == 0:
        return math.inf if n_uncovered else 0
    return -(-n_uncovered // biggest)


def exact_set_cover(inst: SetCoverInstance, budget: int = DEFAULT_BUDGET) -> list:
    """Minimum-cardinality cover by iterative-deepening branch and bound.

    Branches on the lowest uncovered element; families covering it are tried
    by most newly covered elements first, then by *higher* id.  Among equally
    small covers this picks a deterministic one.  Raises
    :class:`BudgetExceeded` (carrying the greedy cover) when more than
    ``budget`` search nodes are needed.
    """
    return exact_set_cover_stats(inst, budget)[0]


def exact_set_cover_stats(inst: SetCoverInstance, budget: int = DEFAULT_BUDGET):
    """Like :func:`exact_set_cover` but returns ``(ids, greedy_ids, expansions)``."""
    greedy = greedy_set_cover(inst)
    elements = sorted(inst.universe)
    bit = {w: k for k, w in enumerate(elements)}
    fam_ids = [fid for fid, _ in inst.families]
    masks = [sum(1 << bit[w] for w in members) for _, members in inst.families]
    full = (1 << len(elements)) - 1
    covering = [[f for f, msk in enumerate(masks) if msk >> k & 1]
                for k in range(len(elements))]
    used = 0

    def dfs(uncovered, picks_left, chosen):
        nonlocal used
        used += 1
        if used > budget:
            raise BudgetExceeded(greedy, used)
        if not uncovered:
            return list(chosen)
        if picks_left == 0:
            return None
        n_unc = bin(uncovered).count("1")
        if _lower_bound(uncovered, masks, n_unc) > picks_left:
            return None
        low = (uncovered & -uncovered).bit_length() - 1
        cands = sorted(covering[low],
                       key=lambda f: (-bin(masks[f] & uncovered).count("1"), -fam_ids[f]))
        for f in cands:
            chosen.append(f)
            hit = dfs(uncovered & ~masks[f], picks_left - 1, chosen)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    start = _lower_bound(full, masks, len(elements)) if elements else 0
    for k in range(start, len(greedy) + 1):
        hit = dfs(full, k, [])
        if hit is not None:
            return sorted(fam_ids[f] for f in hit), greedy, used
    return greedy, greedy, used  # pragma: no cover - greedy size always succeeds
