"""Structural patterns, descriptor systems and their bipartite graph.

A descriptor system ``F x' = A x + B u`` is represented only by the zero /
nonzero patterns of ``F``, ``A`` and ``B``.  Its bipartite graph has the
left side ``V+ = X u U`` (states then inputs) and the right side
``V- = {e_1..e_n}`` (equations).  A nonzero at row ``i``, column ``j`` of
``A`` or ``F`` gives an edge between ``e_i`` and ``x_j``; a nonzero at
``(i, j)`` of ``B`` gives an edge between ``e_i`` and ``u_j``.  F-tagged
edges are the s-arcs.

All indices seen by users are 1-based.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple


class Node(NamedTuple):
    """A labeled graph node: kind ``'x'`` (state), ``'u'`` (input) or ``'e'`` (equation)."""

    kind: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @classmethod
    def parse(cls, label: str) -> "Node":
        kind, digits = label[:1], label[1:]
        if kind not in ("x", "u", "e") or not digits.isdigit() or int(digits) < 1:
            raise ValueError(f"bad node label {label!r}")
        return cls(kind, int(digits))


def x(i: int) -> Node:
    return Node("x", i)


def u(i: int) -> Node:
    return Node("u", i)


def e(i: int) -> Node:
    return Node("e", i)


@dataclass(frozen=True)
class StructuralPattern:
    """Zero/nonzero pattern of a ``rows x cols`` matrix (1-based positions)."""

    rows: int
    cols: int
    nonzeros: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("pattern dimensions must be non-negative")
        nz = frozenset((int(i), int(j)) for i, j in self.nonzeros)
        for i, j in nz:
            if not (1 <= i <= self.rows and 1 <= j <= self.cols):
                raise ValueError(
                    f"entry ({i}, {j}) outside a {self.rows}x{self.cols} pattern")
        object.__setattr__(self, "nonzeros", nz)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable) -> "StructuralPattern":
        entries = list(entries)
        if len(set(entries)) != len(entries):
            raise ValueError("duplicate entries in pattern")
        return cls(rows, cols, frozenset(entries))

    @classmethod
    def from_dense(cls, matrix) -> "StructuralPattern":
        """Pattern of a nested-sequence or array matrix; any nonzero value counts."""
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        nz = {(i + 1, j + 1) for i in range(rows) for j in range(cols) if matrix[i][j]}
        return cls(rows, cols, frozenset(nz))

    @classmethod
    def empty(cls, rows: int, cols: int) -> "StructuralPattern":
        return cls(rows, cols, frozenset())

    @classmethod
    def diagonal(cls, n: int) -> "StructuralPattern":
        return cls(n, n, frozenset((i, i) for i in range(1, n + 1)))

    @classmethod
    def full(cls, rows: int, cols: int) -> "StructuralPattern":
        return cls(rows, cols, frozenset(
            (i, j) for i in range(1, rows + 1) for j in range(1, cols + 1)))

    def __len__(self) -> int:
        return len(self.nonzeros)

    def __contains__(self, pos) -> bool:
        return tuple(pos) in self.nonzeros

    def sorted_entries(self) -> list:
        return sorted(self.nonzeros)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, j in self.nonzeros:
            out[i - 1][j - 1] = 1
        return out


@dataclass(frozen=True)
class DescriptorSystem:
    F: StructuralPattern
    A: StructuralPattern
    B: StructuralPattern

    def __post_init__(self):
        n = self.A.rows
        if self.A.cols != n or self.F.rows != n or self.F.cols != n:
            raise ValueError("F and A must both be square of the same size")
        if self.B.rows != n:
            raise ValueError(f"B must have {n} rows, got {self.B.rows}")

    @classmethod
    def from_patterns(cls, F, A, B=None) -> "DescriptorSystem":
        """Build from patterns or dense 0/1 nested lists; ``B=None`` means no inputs."""
        F = F if isinstance(F, StructuralPattern) else StructuralPattern.from_dense(F)
        A = A if isinstance(A, StructuralPattern) else StructuralPattern.from_dense(A)
        if B is None:
            B = StructuralPattern.empty(A.rows, 0)
        elif not isinstance(B, StructuralPattern):
            B = StructuralPattern.from_dense(B)
            if B.rows == 0:
                B = StructuralPattern.empty(A.rows, 0)
        return cls(F, A, B)

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def m(self) -> int:
        return self.B.cols

    def autonomous(self) -> "DescriptorSystem":
        """The same pencil with the input matrix dropped."""
        return DescriptorSystem(self.F, self.A, StructuralPattern.empty(self.n, 0))

    def with_inputs(self, B: StructuralPattern) -> "DescriptorSystem":
        return DescriptorSystem(self.F, self.A, B)

    def with_diagonal_inputs(self, rows) -> "DescriptorSystem":
        """Attach one dedicated input per equation row in ``rows`` (sorted)."""
        rows = sorted(set(rows))
        entries = frozenset((r, k + 1) for k, r in enumerate(rows))
        return self.with_inputs(StructuralPattern(self.n, len(rows), entries))


class GraphView(enum.Enum):
    """Which tagged edge families a graph operation sees.

    ``GA`` and ``GAsF`` have only state nodes on the left; ``GAB`` and
    ``GFull`` also include the input nodes.
    """

    GA = "GA"
    GAsF = "GAsF"
    GAB = "GAB"
    GFull = "GFull"

    @property
    def tags(self) -> frozenset:
        return _VIEW_TAGS[self]

    @property
    def has_inputs(self) -> bool:
        return "B" in self.tags or self is GraphView.GFull


_VIEW_TAGS = {
    GraphView.GA: frozenset("A"),
    GraphView.GAsF: frozenset("AF"),
    GraphView.GAB: frozenset("AB"),
    GraphView.GFull: frozenset("AFB"),
}


class TaggedEdge(NamedTuple):
    plus: Node
    minus: Node
    tag: str


class StructEdge(NamedTuple):
    """A simple bipartite edge of a view; ``s_arc`` is true iff an F-tag is present."""

    plus: Node
    minus: Node
    s_arc: bool


class Adjacency(NamedTuple):
    """Integer form of a view used by the matching and DM kernels.

    Left node ``p`` is ``plus_nodes[p]``; right node ``q`` is ``e_{q+1}``.
    ``adj[p]`` is the sorted list of right neighbours of ``p`` and
    ``s_arcs`` the set of ``(p, q)`` pairs carrying an F-tag.
    """

    plus_nodes: tuple
    n_minus: int
    adj: list
    s_arcs: frozenset


@dataclass(frozen=True)
class BipartiteGraph:
    n: int
    m: int
    edges: frozenset  # of TaggedEdge

    @property
    def plus_nodes(self) -> tuple:
        return tuple(x(j) for j in range(1, self.n + 1)) + tuple(
            u(j) for j in range(1, self.m + 1))

    @property
    def minus_nodes(self) -> tuple:
        return tuple(e(i) for i in range(1, self.n + 1))

    def view_plus_nodes(self, view: GraphView) -> tuple:
        if view.has_inputs:
            return self.plus_nodes
        return self.plus_nodes[: self.n]

    def tagged(self, tag: str) -> frozenset:
        return frozenset(ed for ed in self.edges if ed.tag == tag)

    @cached_property
    def _adjacency_cache(self) -> dict:
        return {}

    def adjacency(self, view: GraphView) -> Adjacency:
        cache = self._adjacency_cache
        if view not in cache:
            plus = self.view_plus_nodes(view)
            pos = {node: k for k, node in enumerate(plus)}
            nbrs = [set() for _ in plus]
            s_arcs = set()
            for ed in self.edges:
                if ed.tag not in view.tags:
                    continue
                p, q = pos[ed.plus], ed.minus.index - 1
                nbrs[p].add(q)
                if ed.tag == "F":
                    s_arcs.add((p, q))
            cache[view] = Adjacency(plus, self.n, [sorted(s) for s in nbrs],
                                    frozenset(s_arcs))
        return cache[view]


def build_bipartite(sys: DescriptorSystem) -> BipartiteGraph:
    edges = set()
    for tag, pattern, kind in (("A", sys.A, "x"), ("F", sys.F, "x"), ("B", sys.B, "u")):
        for i, j in pattern.nonzeros:
            edges.add(TaggedEdge(Node(kind, j), e(i), tag))
    return BipartiteGraph(sys.n, sys.m, frozenset(edges))


def view_edges(g: BipartiteGraph, view: GraphView) -> frozenset:
    """Structural (collapsed) edges of ``view`` with their s-arc flag."""
    merged: dict = {}
    for ed in g.edges:
        if ed.tag in view.tags:
            key = (ed.plus, ed.minus)
            merged[key] = merged.get(key, False) or ed.tag == "F"
    return frozenset(StructEdge(p, q, s) for (p, q), s in merged.items())


# -- text format -------------------------------------------------------------

class SystemFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_header(line: str, lineno: int, word: str, keys: tuple) -> dict:
    parts = line.split()
    if not parts or parts[0] != word or len(parts) != len(keys) + 1:
        raise SystemFormatError(
            lineno, f"expected header '{word} " + " ".join(f"{k}=<int>" for k in keys) + "'")
    values = {}
    for key, part in zip(keys, parts[1:]):
        name, _, val = part.partition("=")
        if name != key or not val.isdigit():
            raise SystemFormatError(lineno, f"malformed header field {part!r}")
        values[key] = int(val)
    return values


def parse_system(text: str) -> DescriptorSystem:
    lines = text.splitlines()
    header_seen = False
    n = m = 0
    section = None
    entries: dict = {"F": {}, "A": {}, "B": {}}
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        if not header_seen:
            hdr = _parse_header(line, lineno, "descriptor", ("n", "m"))
            n, m = hdr["n"], hdr["m"]
            header_seen = True
            continue
        if line in ("F:", "A:", "B:"):
            section = line[0]
            continue
        if section is None:
            raise SystemFormatError(lineno, "entry before any 'F:', 'A:' or 'B:' section")
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise SystemFormatError(lineno, f"expected '<row> <col>', got {line!r}")
        i, j = int(parts[0]), int(parts[1])
        cols = m if section == "B" else n
        if not (1 <= i <= n and 1 <= j <= cols):
            raise SystemFormatError(
                lineno, f"entry {i} {j} out of range for {section} ({n}x{cols})")
        if (i, j) in entries[section]:
            raise SystemFormatError(
                lineno, f"duplicate {section} entry {i} {j} (first on line "
                        f"{entries[section][(i, j)]})")
        entries[section][(i, j)] = lineno
    if not header_seen:
        raise SystemFormatError(max(len(lines), 1), "missing 'descriptor n=.. m=..' header")
    return DescriptorSystem(
        StructuralPattern(n, n, frozenset(entries["F"])),
        StructuralPattern(n, n, frozenset(entries["A"])),
        StructuralPattern(n, m, frozenset(entries["B"])),
    )


def serialize_system(sys: DescriptorSystem, comments: Iterable[str] = ()) -> str:
    out = [f"# {c}" if c else "#" for c in comments]
    out.append(f"descriptor n={sys.n} m={sys.m}")
    blocks = [("F", sys.F), ("A", sys.A)]
    if sys.m:
        blocks.append(("B", sys.B))
    for name, pattern in blocks:
        out.append(f"{name}:")
        out.extend(f"{i} {j}" for i, j in pattern.sorted_entries())
    return "\n".join(out) + "\n"
