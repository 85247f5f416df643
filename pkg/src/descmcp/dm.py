"""Dulmage-Mendelsohn decomposition of a bipartite graph view.

Given a maximum matching ``M``, the auxiliary digraph has every edge
oriented ``V+ -> V-`` and every matching edge additionally ``V- -> V+``.
``V0`` is what the free ``V+`` nodes reach, ``Vinf`` is what reaches the
free ``V-`` nodes, and the strongly connected components of the rest are
the consistent components.  ``Gi <= Gj`` iff the auxiliary graph has a path
from ``Gj`` to ``Gi``; ``G0`` is below and ``Ginf`` above every consistent
component.

Component ids follow the usual display: ``0`` for ``G0``, ``1..b`` for the
consistent components in a topological order of ``<=`` (smallest first,
ties broken by lowest equation index) and ``b + 1`` for ``Ginf``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import (breadth_first_order, connected_components,
                                  maximum_bipartite_matching)

from .matching import Matching, _FREE, _to_matching, hopcroft_karp, validate_matching
from .system import BipartiteGraph, GraphView, Node

# above this many edges dm_decompose switches to the vectorized kernel
LARGE_GRAPH_EDGES = 200_000

INCONSISTENT_ZERO = "inconsistent_zero"
CONSISTENT = "consistent"
INCONSISTENT_INFINITY = "inconsistent_infinity"


class Blocks(NamedTuple):
    """Integer-level DM result.

    ``plus_block[p]`` / ``minus_block[q]`` hold the component id of every
    node; ``order`` holds ``(hi, lo)`` pairs between consistent ids
    meaning ``G_lo <= G_hi`` (direct condensation edges only).
    """

    match_plus: list
    match_minus: list
    plus_block: list
    minus_block: list
    n_consistent: int
    has_zero: bool
    has_infinity: bool
    order: frozenset


def _tarjan(succ):
    """Iterative Tarjan; returns a component label per vertex."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comp = [-1] * n
    counter = 0
    n_comp = 0
    for s in range(n):
        if index[s] != -1:
            continue
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack[s] = True
        work = [[s, 0]]
        while work:
            frame = work[-1]
            v, i = frame
            nbrs = succ[v]
            if i < len(nbrs):
                frame[1] = i + 1
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append([w, 0])
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp, n_comp


def _number_components(n_comp, lower, key):
    """Ids ``1..n_comp`` in topological order of ``<=``, smallest key first on ties."""
    upper = [[] for _ in range(n_comp)]
    pending = [len(lw) for lw in lower]
    for c, lw in enumerate(lower):
        for d in lw:
            upper[d].append(c)
    heap = [(key[c], c) for c in range(n_comp) if pending[c] == 0]
    heapq.heapify(heap)
    new_id = [0] * n_comp
    nxt = 1
    while heap:
        _, c = heapq.heappop(heap)
        new_id[c] = nxt
        nxt += 1
        for d in upper[c]:
            pending[d] -= 1
            if pending[d] == 0:
                heapq.heappush(heap, (key[d], d))
    return new_id


def decompose(adj, n_minus=None, matching=None) -> Blocks:
    """DM decomposition of an integer bipartite graph.

    ``adj`` is either a list of sorted right-neighbour lists (one per left
    node, ``n_minus`` right nodes) or a scipy sparse ``(n_plus, n_minus)``
    matrix, which takes the vectorized path.  ``matching`` may supply
    ``(match_plus, match_minus)``; it must be maximum, otherwise
    ``ValueError`` is raised.
    """
    if sp.issparse(adj):
        return _decompose_sparse(sp.csr_matrix(adj), matching)
    n_plus = len(adj)
    if matching is None:
        match_p, match_m = hopcroft_karp(adj, n_minus)
    else:
        match_p, match_m = matching

    # V0: forward search from free plus nodes
    zero_p = [False] * n_plus
    zero_m = [False] * n_minus
    stack = [p for p in range(n_plus) if match_p[p] == _FREE]
    for p in stack:
        zero_p[p] = True
    while stack:
        p = stack.pop()
        for q in adj[p]:
            if zero_m[q]:
                continue
            zero_m[q] = True
            r = match_m[q]
            if r == _FREE:
                raise ValueError("matching is not maximum (augmenting path exists)")
            if not zero_p[r]:
                zero_p[r] = True
                stack.append(r)

    # Vinf: backward search from free minus nodes
    radj = [[] for _ in range(n_minus)]
    for p, qs in enumerate(adj):
        for q in qs:
            radj[q].append(p)
    inf_p = [False] * n_plus
    inf_m = [False] * n_minus
    stack = [q for q in range(n_minus) if match_m[q] == _FREE]
    for q in stack:
        inf_m[q] = True
    while stack:
        q = stack.pop()
        for p in radj[q]:
            if inf_p[p]:
                continue
            inf_p[p] = True
            r = match_p[p]
            if r != _FREE and not inf_m[r]:
                inf_m[r] = True
                stack.append(r)

    # remaining nodes are whole matched pairs; contract each pair to its plus node
    rest = [p for p in range(n_plus)
            if match_p[p] != _FREE and not zero_p[p] and not inf_p[p]]
    pair_of = {p: k for k, p in enumerate(rest)}
    succ = []
    for p in rest:
        mine = match_p[p]
        out = []
        for q in adj[p]:
            if q == mine:
                continue
            k = pair_of.get(match_m[q])
            if k is not None:
                out.append(k)
        succ.append(out)
    scc, n_scc = _tarjan(succ)

    lower = [set() for _ in range(n_scc)]
    for k, outs in enumerate(succ):
        ck = scc[k]
        for w in outs:
            cw = scc[w]
            if cw != ck:
                lower[ck].add(cw)
    key = [n_minus] * n_scc
    for k, p in enumerate(rest):
        q = match_p[p]
        if q < key[scc[k]]:
            key[scc[k]] = q
    new_id = _number_components(n_scc, lower, key)

    b = n_scc
    has_zero = any(zero_p) or any(zero_m)
    has_inf = any(inf_p) or any(inf_m)
    plus_block = [0] * n_plus
    minus_block = [0] * n_minus
    for p in range(n_plus):
        if inf_p[p]:
            plus_block[p] = b + 1
    for q in range(n_minus):
        if inf_m[q]:
            minus_block[q] = b + 1
    for k, p in enumerate(rest):
        c = new_id[scc[k]]
        plus_block[p] = c
        minus_block[match_p[p]] = c
    order = frozenset((new_id[c], new_id[d]) for c in range(n_scc) for d in lower[c])
    return Blocks(match_p, match_m, plus_block, minus_block, b, has_zero, has_inf, order)


def _reach(graph, sources, n_nodes):
    """Boolean mask of nodes reachable from ``sources`` (via a virtual root)."""
    mask = np.zeros(n_nodes, dtype=bool)
    if len(sources) == 0:
        return mask
    coo = graph.tocoo()
    root = n_nodes
    rows = np.concatenate([coo.row, np.full(len(sources), root)])
    cols = np.concatenate([coo.col, sources])
    g = sp.csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                      shape=(n_nodes + 1, n_nodes + 1))
    order = breadth_first_order(g, root, directed=True, return_predecessors=False)
    mask[order[order != root]] = True
    return mask


def _decompose_sparse(G, matching=None) -> Blocks:
    n_plus, n_minus = G.shape
    G = G.astype(bool).astype(np.int8)
    G.sort_indices()
    if matching is None:
        mp = np.asarray(maximum_bipartite_matching(G, perm_type="column"), dtype=np.int64)
        mm = np.full(n_minus, -1, dtype=np.int64)
        hit = mp >= 0
        mm[mp[hit]] = np.nonzero(hit)[0]
    else:
        mp = np.asarray(matching[0], dtype=np.int64)
        mm = np.asarray(matching[1], dtype=np.int64)

    # auxiliary digraph: plus p -> minus (n_plus + q) for every edge,
    # minus -> plus for matched edges
    coo = G.tocoo()
    matched = np.nonzero(mp >= 0)[0]
    n_nodes = n_plus + n_minus
    src = np.concatenate([coo.row, n_plus + mp[matched]])
    dst = np.concatenate([n_plus + coo.col, matched])
    aux = sp.csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)),
                        shape=(n_nodes, n_nodes))

    free_plus = np.nonzero(mp < 0)[0]
    free_minus = n_plus + np.nonzero(mm < 0)[0]
    zero = _reach(aux, free_plus, n_nodes)
    inf = _reach(aux.T.tocsr(), free_minus, n_nodes)
    if np.any(zero[free_minus]) or np.any(zero & inf):
        raise ValueError("matching is not maximum (augmenting path exists)")

    rest = ~(zero | inf)
    rest_idx = np.nonzero(rest)[0]
    local = np.full(n_nodes, -1, dtype=np.int64)
    local[rest_idx] = np.arange(len(rest_idx))
    keep = rest[src] & rest[dst]
    sub = sp.csr_matrix((np.ones(int(keep.sum()), dtype=np.int8),
                         (local[src[keep]], local[dst[keep]])),
                        shape=(len(rest_idx), len(rest_idx)))
    n_scc, lab = connected_components(sub, directed=True, connection="strong")

    cs, cd = lab[local[src[keep]]], lab[local[dst[keep]]]
    cross = cs != cd
    pairs = np.unique(np.stack([cs[cross], cd[cross]], axis=1), axis=0) if cross.any() \
        else np.zeros((0, 2), dtype=np.int64)
    lower = [[] for _ in range(n_scc)]
    for c, d in pairs.tolist():
        lower[c].append(d)
    key = np.full(n_scc, n_minus, dtype=np.int64)
    minus_rest = rest_idx[rest_idx >= n_plus]
    np.minimum.at(key, lab[local[minus_rest]], minus_rest - n_plus)
    new_id = np.asarray(_number_components(n_scc, lower, key.tolist()), dtype=np.int64)

    b = n_scc
    block = np.zeros(n_nodes, dtype=np.int64)
    block[inf] = b + 1
    block[rest_idx] = new_id[lab]
    order = frozenset((int(new_id[c]), int(new_id[d])) for c, d in pairs.tolist())
    return Blocks(mp.tolist(), mm.tolist(), block[:n_plus].tolist(),
                  block[n_plus:].tolist(), b, bool(zero.any()), bool(inf.any()), order)


def adjacency_to_csr(adj, n_minus):
    lengths = [len(a) for a in adj]
    indptr = np.zeros(len(adj) + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    indices = np.fromiter((q for a in adj for q in a), dtype=np.int64, count=int(indptr[-1]))
    return sp.csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr),
                         shape=(len(adj), n_minus))


@dataclass(frozen=True)
class DMComponent:
    id: int
    kind: str
    plus: frozenset
    minus: frozenset
    s_arcs: frozenset = field(default_factory=frozenset)  # intra-component F edges

    @property
    def has_s_arc(self) -> bool:
        return bool(self.s_arcs)

    @property
    def name(self) -> str:
        return "Ginf" if self.kind == INCONSISTENT_INFINITY else f"G{self.id}"

    @property
    def nodes(self) -> frozenset:
        return self.plus | self.minus

    def label(self) -> str:
        return "{" + ",".join(str(v) for v in _sorted_nodes(self.minus | self.plus)) + "}"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind,
            "plus": [str(v) for v in sorted(self.plus)],
            "minus": [str(v) for v in sorted(self.minus)],
            "sArcs": [[str(p), str(q)] for p, q in sorted(self.s_arcs)],
        }


def _sorted_nodes(nodes):
    rank = {"e": 0, "x": 1, "u": 2}
    return sorted(nodes, key=lambda v: (rank[v.kind], v.index))


@dataclass(frozen=True)
class DMDecomposition:
    view: GraphView
    components: tuple
    order: frozenset  # (j, i): G_i <= G_j, including the G0 / Ginf relations
    matching: Matching

    @cached_property
    def _by_id(self) -> dict:
        return {c.id: c for c in self.components}

    @cached_property
    def _node_index(self) -> dict:
        return {v: c.id for c in self.components for v in c.nodes}

    @cached_property
    def _below(self) -> dict:
        # ids are topological (lower ids are never above higher ones), so a
        # single increasing sweep closes the relation
        below = {}
        children = {c.id: [] for c in self.components}
        for hi, lo in self.order:
            children[hi].append(lo)
        for cid in sorted(children):
            mask = 1 << cid
            for lo in children[cid]:
                mask |= below[lo]
            below[cid] = mask
        return below

    def component(self, cid: int) -> DMComponent:
        return self._by_id[cid]

    @property
    def consistent(self) -> tuple:
        return tuple(c for c in self.components if c.kind == CONSISTENT)

    @property
    def zero(self):
        return next((c for c in self.components if c.kind == INCONSISTENT_ZERO), None)

    @property
    def infinity(self):
        return next((c for c in self.components if c.kind == INCONSISTENT_INFINITY), None)

    def component_of(self, node: Node) -> int:
        try:
            return self._node_index[node]
        except KeyError:
            raise KeyError(f"node {node} is not in the decomposed view") from None

    def reaches(self, c1: int, c2: int) -> bool:
        """True iff ``G_c2 <= G_c1`` (a path runs from ``c1`` down to ``c2``)."""
        if c1 not in self._by_id or c2 not in self._by_id:
            raise KeyError(f"unknown component id {c1 if c1 not in self._by_id else c2}")
        return bool(self._below[c1] >> c2 & 1)

    def s_consistent_components(self) -> frozenset:
        return frozenset(c.id for c in self.consistent if c.has_s_arc)

    def maximal_s_consistent(self) -> frozenset:
        s_ids = self.s_consistent_components()
        return frozenset(
            i for i in s_ids
            if not any(j != i and self.reaches(j, i) for j in s_ids))

    def partition(self) -> frozenset:
        """Matching-independent summary used for equality checks."""
        return frozenset((c.kind, c.plus, c.minus, c.s_arcs) for c in self.components)

    def order_closure(self) -> frozenset:
        """All ``(upper, lower)`` pairs of distinct components, as node sets."""
        out = set()
        for a in self.components:
            for b in self.components:
                if a.id != b.id and self.reaches(a.id, b.id):
                    out.add((a.nodes, b.nodes))
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "view": self.view.value,
            "components": [c.to_json() for c in self.components],
            "order": [[self.component(j).name, self.component(i).name]
                      for j, i in sorted(self.order)],
            "matching": self.matching.to_json(),
        }

    def to_text(self) -> str:
        lines = [f"DM decomposition of {self.view.value}"]
        for c in self.components:
            flag = " s-arc" if c.has_s_arc else ""
            lines.append(f"  {c.name:<5} {c.kind:<22} {c.label()}{flag}")
        for j, i in sorted(self.order):
            lines.append(f"  {self.component(i).name} <= {self.component(j).name}")
        return "\n".join(lines) + "\n"


def dm_decompose(g: BipartiteGraph, view: GraphView, matching: Matching = None) -> DMDecomposition:
    adj = g.adjacency(view)
    plus = adj.plus_nodes
    given = None
    if matching is not None:
        if matching.view is not view:
            raise ValueError(f"matching belongs to {matching.view.value}, not {view.value}")
        validate_matching(g, view, matching)
        pos = {node: k for k, node in enumerate(plus)}
        mp = [_FREE] * len(plus)
        mm = [_FREE] * adj.n_minus
        for p, q in matching.pairs:
            mp[pos[p]] = q.index - 1
            mm[q.index - 1] = pos[p]
        given = (mp, mm)
    if given is None and sum(len(a) for a in adj.adj) > LARGE_GRAPH_EDGES:
        blk = decompose(adjacency_to_csr(adj.adj, adj.n_minus))
    else:
        blk = decompose(adj.adj, adj.n_minus, given)

    members: dict = {}
    for p, cid in enumerate(blk.plus_block):
        members.setdefault(cid, (set(), set()))[0].add(p)
    for q, cid in enumerate(blk.minus_block):
        members.setdefault(cid, (set(), set()))[1].add(q)
    inf_id = blk.n_consistent + 1

    components = []
    for cid in sorted(members):
        ps, qs = members[cid]
        if cid == 0:
            kind = INCONSISTENT_ZERO
        elif cid == inf_id:
            kind = INCONSISTENT_INFINITY
        else:
            kind = CONSISTENT
        s_arcs = frozenset((plus[p], Node("e", q + 1)) for p, q in adj.s_arcs
                           if p in ps and q in qs)
        components.append(DMComponent(
            cid, kind,
            frozenset(plus[p] for p in ps),
            frozenset(Node("e", q + 1) for q in qs),
            s_arcs))

    order = set(blk.order)
    consistent_ids = range(1, blk.n_consistent + 1)
    if 0 in members:
        order.update((c, 0) for c in consistent_ids)
    if inf_id in members:
        order.update((inf_id, c) for c in consistent_ids)
        if 0 in members:
            order.add((inf_id, 0))
    return DMDecomposition(view, tuple(components), frozenset(order),
                           _to_matching(g, view, blk.match_plus))


def s_consistent_components(dm: DMDecomposition) -> frozenset:
    return dm.s_consistent_components()


def maximal_s_consistent(dm: DMDecomposition) -> frozenset:
    return dm.maximal_s_consistent()


def component_of(dm: DMDecomposition, node: Node) -> int:
    return dm.component_of(node)


def reaches(dm: DMDecomposition, c1: int, c2: int) -> bool:
    return dm.reaches(c1, c2)


def to_dot(dm: DMDecomposition, g: BipartiteGraph) -> str:
    """Graphviz rendering: one cluster per component, bold s-arcs, dashed input edges."""
    from .system import view_edges

    lines = [f'digraph "DM_{dm.view.value}" {{', "  rankdir=BT;", "  compound=true;"]
    for c in dm.components:
        title = f"{c.name} ({c.kind}{', s-arc' if c.has_s_arc else ''})"
        lines.append(f"  subgraph cluster_{c.id} {{")
        lines.append(f'    label="{title}";')
        for v in _sorted_nodes(c.nodes):
            shape = "box" if v.kind == "e" else "ellipse"
            lines.append(f'    "{v}" [shape={shape}];')
        lines.append("  }")
    b_edges = {(ed.plus, ed.minus) for ed in g.edges if ed.tag == "B"}
    for ed in sorted(view_edges(g, dm.view)):
        style = []
        if ed.s_arc and dm.component_of(ed.plus) == dm.component_of(ed.minus):
            style.append("style=bold")
        elif (ed.plus, ed.minus) in b_edges:
            style.append("style=dashed")
        attrs = " [" + ", ".join(["dir=none"] + style) + "]"
        lines.append(f'  "{ed.plus}" -> "{ed.minus}"{attrs};')
    for j, i in sorted(dm.order):
        hi, lo = dm.component(j), dm.component(i)
        a = next(iter(_sorted_nodes(lo.nodes)))
        b = next(iter(_sorted_nodes(hi.nodes)))
        lines.append(f'  "{a}" -> "{b}" [ltail=cluster_{i}, lhead=cluster_{j}, '
                     f'color=gray, style=dotted];')
    lines.append("}")
    return "\n".join(lines) + "\n"
