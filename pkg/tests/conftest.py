"""Shared corpus builders and independent reference implementations.

The reference routines here (brute-force colouring checks, the topological
minor tester, networkx cuts) deliberately avoid the package's own code
paths so every cross-check is a genuine dual route.
"""

from __future__ import annotations

import itertools
import random

import pytest

from defclust.graphs import Graph


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph(
        n,
        [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p],
    )


def random_connected_graph(n: int, extra_p: float, seed: int) -> Graph:
    """Random spanning tree plus extra edges: always connected."""
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v))
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < extra_p:
            edges.append((u, v))
    return Graph(n, set((min(e), max(e)) for e in edges))


def random_subcubic(n: int, seed: int) -> Graph:
    rng = random.Random(seed)
    deg = [0] * n
    edges = set()
    for _ in range(3 * n):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or deg[u] >= 3 or deg[v] >= 3:
            continue
        e = (min(u, v), max(u, v))
        if e in edges:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph(n, edges)


def brute_exists_defect(G: Graph, k: int, d: int) -> bool:
    for assign in itertools.product(range(k), repeat=G.n):
        if all(
            sum(1 for w in G.neighbours(v) if assign[w] == assign[v]) <= d
            for v in range(G.n)
        ):
            return True
    return False


def brute_exists_clustering(G: Graph, k: int, c: int) -> bool:
    for assign in itertools.product(range(k), repeat=G.n):
        ok = True
        seen: set[int] = set()
        for s in range(G.n):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                v = stack.pop()
                for w in G.neighbours(v):
                    if assign[w] == assign[s] and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            if len(comp) > c:
                ok = False
                break
        if ok:
            return True
    return False


def has_topological_minor(G: Graph, H: Graph) -> bool:
    """Subdivision containment by explicit branch-vertex injection plus
    internally-disjoint path routing.  Tiny instances only."""
    if H.n > G.n:
        return False
    hdegs = [H.degree(v) for v in range(H.n)]
    cands = [
        [g for g in range(G.n) if G.degree(g) >= hdegs[h]] for h in range(H.n)
    ]
    hedges = list(H.edges())

    def route(i: int, used_v: set, used_inner: set, phi: dict) -> bool:
        if i == len(hedges):
            return True
        a, b = hedges[i]
        sa, sb = phi[a], phi[b]

        # DFS over internally-disjoint paths from sa to sb
        def paths(v, seen):
            if G.has_edge(v, sb):
                yield []
            for w in G.neighbours(v):
                if w in used_v or w in used_inner or w in seen or w == sb:
                    continue
                for rest in paths(w, seen | {w}):
                    yield [w] + rest

        for inner in paths(sa, set()):
            for x in inner:
                used_inner.add(x)
            if route(i + 1, used_v, used_inner, phi):
                return True
            for x in inner:
                used_inner.discard(x)
        return False

    def place(h: int, phi: dict, taken: set) -> bool:
        if h == H.n:
            return route(0, set(phi.values()), set(), phi)
        for g in cands[h]:
            if g in taken:
                continue
            phi[h] = g
            if place(h + 1, phi, taken | {g}):
                return True
            del phi[h]
        return False

    return place(0, {}, set())


@pytest.fixture(scope="session")
def petersen() -> Graph:
    return Graph(
        10,
        [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ],
    )
