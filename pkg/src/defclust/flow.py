"""Small max-flow kernel (Edmonds-Karp) shared by density and cut routines.

Capacities may be ints or Fractions; arithmetic is exact either way.
Desk-scale only: the package never runs flows on more than a few hundred
nodes.
"""

from __future__ import annotations

from collections import deque


def _augment_all(residual, s, t):
    value = 0
    while True:
        parent = {s: -1}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for v in sorted(residual[u]):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    q.append(v)
        if t not in parent:
            return value, set(parent)
        path = []
        v = t
        while v != s:
            u = parent[v]
            path.append((u, v))
            v = u
        aug = min(residual[u][v] for u, v in path)
        for u, v in path:
            residual[u][v] -= aug
            residual[v][u] += aug
        value += aug


def _build_residual(n, caps):
    residual: dict[int, dict[int, object]] = {v: {} for v in range(n)}
    for (u, v), c in caps.items():
        residual[u][v] = residual[u].get(v, 0) + c
        residual[v].setdefault(u, 0)
    return residual


def max_flow(n: int, caps: dict[tuple[int, int], object], s: int, t: int):
    """Max s-t flow value and the source side of a minimum cut.

    ``caps`` maps directed arcs to capacities.  Returns (value, side) where
    ``side`` is the set of nodes reachable from s in the final residual
    network.
    """
    residual = _build_residual(n, caps)
    return _augment_all(residual, s, t)


def min_edge_cut(adj_caps: dict[int, dict[int, int]], n: int, s: int, t: int):
    """Min cut between s and t in an undirected capacitated graph.

    ``adj_caps[u][v]`` is the (symmetric) capacity of edge uv.  Returns
    (value, source_side).
    """
    caps: dict[tuple[int, int], object] = {}
    for u, nbrs in adj_caps.items():
        for v, c in nbrs.items():
            caps[(u, v)] = c
    return max_flow(n, caps, s, t)


def unit_flow_paths(n: int, arcs: dict[tuple[int, int], int], s: int, t: int):
    """Integer max flow plus a decomposition into unit s-t walks.

    Returns (value, walks).  Walks are arc-disjoint as a multiset (an arc
    carrying flow f appears on exactly f walks); callers needing simple
    paths shortcut them.
    """
    residual = _build_residual(n, arcs)
    orig = {(u, v): residual[u].get(v, 0) for u in residual for v in residual[u]}
    value, _ = _augment_all(residual, s, t)
    used: dict[int, dict[int, int]] = {v: {} for v in range(n)}
    for u in residual:
        for v in residual[u]:
            f = orig.get((u, v), 0) - residual[u][v]
            if f > 0:
                used[u][v] = f
    walks = []
    for _ in range(value):
        walk = [s]
        v = s
        while v != t:
            # conservation guarantees a positive out-arc exists
            w = min(w2 for w2, f in used[v].items() if f > 0)
            used[v][w] -= 1
            walk.append(w)
            v = w
        walks.append(walk)
    return value, walks
