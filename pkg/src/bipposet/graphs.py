"""Vertex connectivity of small undirected graphs via unit-capacity max-flow."""

from __future__ import annotations

from collections import deque
from typing import Sequence


class UndefinedConnectivityError(ValueError):
    pass


def is_connected(adj: Sequence[set[int]]) -> bool:
    n = len(adj)
    if n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def local_vertex_connectivity(adj: Sequence[set[int]], s: int, t: int, bound: int | None = None) -> int:
    """Maximum number of internally disjoint ``s``-``t`` paths (``s``, ``t`` non-adjacent).

    Each vertex ``x`` is split into ``x_in = 2x`` and ``x_out = 2x + 1`` joined
    by a unit arc; augmentation stops early once ``bound`` paths are found.
    """
    if t in adj[s]:
        raise ValueError("local vertex connectivity is for non-adjacent pairs")
    # residual capacities keyed by arc
    cap: dict[tuple[int, int], int] = {}
    nbrs: dict[int, list[int]] = {}

    def arc(a: int, b: int) -> None:
        if (a, b) not in cap:
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
            nbrs.setdefault(a, []).append(b)
            nbrs.setdefault(b, []).append(a)
        cap[(a, b)] += 1

    for x in range(len(adj)):
        if x not in (s, t):
            arc(2 * x, 2 * x + 1)
        for y in adj[x]:
            arc(2 * x + 1, 2 * y)
    source, sink = 2 * s + 1, 2 * t
    flow = 0
    while bound is None or flow < bound:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b in nbrs.get(a, ()):
                if b not in parent and cap[(a, b)] > 0:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            break
        b = sink
        while b != source:
            a = parent[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1
    return flow


def vertex_connectivity(adj: Sequence[set[int]]) -> int:
    """Minimum number of vertices whose removal disconnects the graph.

    Complete graphs get ``|V| - 1``.  Pairs examined: a minimum-degree vertex
    against each of its non-neighbours, then non-adjacent pairs of its
    neighbours; one of these pairs is always separated by a minimum cut.
    """
    n = len(adj)
    if n < 2:
        raise UndefinedConnectivityError("vertex connectivity needs at least two vertices")
    if not is_connected(adj):
        return 0
    best = n - 1
    v = min(range(n), key=lambda x: (len(adj[x]), x))
    best = min(best, len(adj[v]))
    for t in range(n):
        if t != v and t not in adj[v]:
            best = min(best, local_vertex_connectivity(adj, v, t, bound=best))
    nb = sorted(adj[v])
    for i, x in enumerate(nb):
        for y in nb[i + 1:]:
            if y not in adj[x]:
                best = min(best, local_vertex_connectivity(adj, x, y, bound=best))
    return best
