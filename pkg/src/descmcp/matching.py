"""Maximum bipartite matching (Hopcroft-Karp) and unmatched-node queries.

Functions are named by the side they return: :func:`unmatched_right` gives
uncovered equation nodes (``V-``), :func:`unmatched_left_plus` uncovered
state/input nodes.
"""
from __future__ import annotations

from dataclasses import dataclass

from .system import BipartiteGraph, GraphView, Node

_FREE = -1


def hopcroft_karp(adj, n_minus, order=None):
    """Maximum matching of an integer bipartite graph.

    ``adj[p]`` lists right neighbours of left node ``p``.  Returns
    ``(match_plus, match_minus)`` with ``-1`` for free nodes.  Left nodes are
    scanned in ``order`` (default ``0..len(adj)-1``) and neighbours in list
    order, so the result is deterministic for a fixed input.
    """
    n_plus = len(adj)
    order = range(n_plus) if order is None else order
    match_p = [_FREE] * n_plus
    match_m = [_FREE] * n_minus

    # greedy start: cheap and removes most of the phases on sparse graphs
    for p in order:
        for q in adj[p]:
            if match_m[q] == _FREE:
                match_p[p] = q
                match_m[q] = p
                break

    inf = n_plus + 1
    while True:
        dist = [inf] * n_plus
        queue = [p for p in order if match_p[p] == _FREE]
        for p in queue:
            dist[p] = 0
        limit = inf
        head = 0
        while head < len(queue):
            p = queue[head]
            head += 1
            d = dist[p]
            if d >= limit:
                break
            for q in adj[p]:
                r = match_m[q]
                if r == _FREE:
                    if limit == inf:
                        limit = d + 1
                elif dist[r] == inf:
                    dist[r] = d + 1
                    queue.append(r)
        if limit == inf:
            break

        ptr = [0] * n_plus
        for root in order:
            if match_p[root] != _FREE:
                continue
            path_p = [root]
            path_q = []
            while path_p:
                p = path_p[-1]
                nbrs = adj[p]
                nxt = None
                while ptr[p] < len(nbrs):
                    q = nbrs[ptr[p]]
                    ptr[p] += 1
                    r = match_m[q]
                    if r == _FREE:
                        if dist[p] + 1 == limit:
                            nxt = (q, None)
                            break
                    elif dist[r] == dist[p] + 1:
                        nxt = (q, r)
                        break
                if nxt is None:
                    dist[p] = inf
                    path_p.pop()
                    if path_q:
                        path_q.pop()
                    continue
                q, r = nxt
                path_q.append(q)
                if r is None:
                    for pp, qq in zip(path_p, path_q):
                        match_p[pp] = qq
                        match_m[qq] = pp
                        dist[pp] = inf
                    break
                path_p.append(r)
    return match_p, match_m


@dataclass(frozen=True)
class Matching:
    """A matching of a specific view, as ``(plus node, minus node)`` pairs."""

    view: GraphView
    pairs: frozenset

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    @property
    def plus_covered(self) -> frozenset:
        return frozenset(p for p, _ in self.pairs)

    @property
    def minus_covered(self) -> frozenset:
        return frozenset(q for _, q in self.pairs)

    def to_json(self) -> list:
        return [[str(p), str(q)] for p, q in sorted(self.pairs)]


def _to_matching(g: BipartiteGraph, view: GraphView, match_p) -> Matching:
    plus = g.view_plus_nodes(view)
    pairs = frozenset((plus[p], Node("e", q + 1)) for p, q in enumerate(match_p)
                      if q != _FREE)
    return Matching(view, pairs)


def max_matching(g: BipartiteGraph, view: GraphView) -> Matching:
    adj = g.adjacency(view)
    match_p, _ = hopcroft_karp(adj.adj, adj.n_minus)
    return _to_matching(g, view, match_p)


def matching_size(g: BipartiteGraph, view: GraphView) -> int:
    """Size of a maximum matching of the view."""
    adj = g.adjacency(view)
    match_p, _ = hopcroft_karp(adj.adj, adj.n_minus)
    return sum(1 for q in match_p if q != _FREE)


def validate_matching(g: BipartiteGraph, view: GraphView, M: Matching) -> None:
    """Raise ``ValueError`` unless ``M`` is a matching drawn from ``view``'s edges."""
    adj = g.adjacency(view)
    pos = {node: k for k, node in enumerate(adj.plus_nodes)}
    seen_p, seen_q = set(), set()
    for p, q in M.pairs:
        if p not in pos or q.kind != "e" or not 1 <= q.index <= adj.n_minus:
            raise ValueError(f"pair ({p}, {q}) uses a node outside the view")
        if (q.index - 1) not in adj.adj[pos[p]]:
            raise ValueError(f"pair ({p}, {q}) is not an edge of {view.value}")
        if p in seen_p or q in seen_q:
            raise ValueError(f"pair ({p}, {q}) shares an endpoint")
        seen_p.add(p)
        seen_q.add(q)


def unmatched_right(g: BipartiteGraph, view: GraphView, M: Matching) -> frozenset:
    """Equation nodes (``V-``) not covered by ``M``."""
    validate_matching(g, view, M)
    return frozenset(g.minus_nodes) - M.minus_covered


def unmatched_left_plus(g: BipartiteGraph, view: GraphView, M: Matching) -> frozenset:
    """State/input nodes (``V+`` of the view) not covered by ``M``."""
    validate_matching(g, view, M)
    return frozenset(g.view_plus_nodes(view)) - M.plus_covered


BRUTE_FORCE_LIMIT = 20


def brute_force_matching(g: BipartiteGraph, view: GraphView) -> int:
    """Exact maximum matching size by exhaustive search (test oracle)."""
    adj = g.adjacency(view)
    if len(adj.plus_nodes) + adj.n_minus > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"brute force limited to {BRUTE_FORCE_LIMIT} nodes, got "
            f"{len(adj.plus_nodes) + adj.n_minus}")
    return brute_force_size(adj.adj, adj.n_minus)


def brute_force_size(adj, n_minus) -> int:
    # each left node either stays unmatched or takes a still-free right node
    best = 0

    def rec(p, used, size):
        nonlocal best
        if size + (len(adj) - p) <= best:
            return
        if p == len(adj):
            best = max(best, size)
            return
        for q in adj[p]:
            if not used >> q & 1:
                rec(p + 1, used | (1 << q), size + 1)
        rec(p + 1, used, size)

    rec(0, 0, 0)
    return best
