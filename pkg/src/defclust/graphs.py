"""Graph representation, traversals, decompositions and density primitives.

The :class:`Graph` type is an immutable simple undirected graph on the
vertex set ``0..n-1``.  Adjacency is stored as sorted neighbour tuples so
that every iteration order in the package is deterministic; all engines
rely on that for bit-reproducible output.  Graph values are safe to share
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import DefclustError, GraphFormatError
from . import flow


class Graph:
    """Immutable simple undirected graph with vertices ``0..n-1``."""

    __slots__ = ("_adj", "labels")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels=None):
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = tuple(tuple(sorted(s)) for s in adj)
        self.labels = tuple(labels) if labels is not None else None

    # -- basic queries -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self):
        """All edges as sorted (u, v) pairs with u < v, in lexicographic order."""
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other):
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        return hash(self._adj)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    # -- derived graphs (all return new values) ------------------------

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges()) + list(extra), self.labels)

    def without_edge(self, u: int, v: int) -> "Graph":
        drop = (min(u, v), max(u, v))
        return Graph(self.n, (e for e in self.edges() if e != drop), self.labels)

    def induced_subgraph(self, vs: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vs``; returns (subgraph, new-id -> old-id map)."""
        old = sorted(set(vs))
        idx = {o: i for i, o in enumerate(old)}
        edges = []
        for i, o in enumerate(old):
            for w in self._adj[o]:
                if w > o and w in idx:
                    edges.append((i, idx[w]))
        return Graph(len(old), edges), old

    def relabelled(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    # -- convenience constructors --------------------------------------

    @staticmethod
    def empty(n: int) -> "Graph":
        return Graph(n)

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(n, combinations(range(n), 2))

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph(n, ((i, i + 1) for i in range(n - 1)))

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise DefclustError("cycle needs n >= 3")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])

    @staticmethod
    def star(leaves: int) -> "Graph":
        return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    @staticmethod
    def complete_bipartite(a: int, b: int) -> "Graph":
        return Graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))

    @staticmethod
    def grid(rows: int, cols: int) -> "Graph":
        def vid(r, c):
            return r * cols + c

        edges = []
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    edges.append((vid(r, c), vid(r, c + 1)))
                if r + 1 < rows:
                    edges.append((vid(r, c), vid(r + 1, c)))
        return Graph(rows * cols, edges)


# -- traversal helpers ----------------------------------------------------


def connected_components(G: Graph) -> list[tuple[int, ...]]:
    """Components as sorted vertex tuples, ordered by smallest member."""
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in G.neighbours(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(G: Graph) -> bool:
    return G.n <= 1 or len(connected_components(G)) == 1


def bfs_distances(G: Graph, r: int) -> list[Optional[int]]:
    dist: list[Optional[int]] = [None] * G.n
    dist[r] = 0
    frontier = [r]
    while frontier:
        nxt = []
        for v in frontier:
            for w in G.neighbours(v):
                if dist[w] is None:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


@dataclass(frozen=True)
class Layering:
    """Ordered partition of V(G) such that edges span at most one level.

    If ``source`` is set, layer i is exactly the distance-i set from it.
    """

    layers: tuple[tuple[int, ...], ...]
    source: Optional[int] = None

    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def check(self, G: Graph) -> None:
        of = self.layer_of()
        if sorted(of) != list(range(G.n)):
            raise DefclustError("layers do not partition V(G)")
        for u, v in G.edges():
            if abs(of[u] - of[v]) > 1:
                raise DefclustError(f"edge ({u},{v}) spans non-consecutive layers")
        if self.source is not None:
            dist = bfs_distances(G, self.source)
            for v in range(G.n):
                if dist[v] != of[v]:
                    raise DefclustError(f"layer of {v} is not its BFS distance")


def bfs_layering(G: Graph, r: int) -> Layering:
    """BFS layering from r.  Raises on disconnected input, naming an unreached vertex."""
    if not (0 <= r < G.n):
        raise DefclustError(f"root {r} not a vertex")
    dist = bfs_distances(G, r)
    for v, d in enumerate(dist):
        if d is None:
            raise DefclustError(f"graph is disconnected: vertex {v} unreachable from {r}")
    top = max(dist)  # type: ignore[type-var]
    layers = [[] for _ in range(top + 1)]
    for v, d in enumerate(dist):
        layers[d].append(v)
    return Layering(tuple(tuple(l) for l in layers), source=r)


# -- blocks and cut vertices ----------------------------------------------


@dataclass(frozen=True)
class Block:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def blocks_and_cutvertices(G: Graph) -> tuple[list[Block], frozenset[int]]:
    """Biconnected blocks and cut vertices (iterative Hopcroft–Tarjan).

    Every edge lands in exactly one block; isolated vertices appear as
    single-vertex blocks with no edges.
    """
    disc = [0] * G.n
    low = [0] * G.n
    timer = 1
    blocks: list[Block] = []
    cuts: set[int] = set()
    estack: list[tuple[int, int]] = []

    for root in range(G.n):
        if disc[root]:
            continue
        if G.degree(root) == 0:
            blocks.append(Block((root,), ()))
            disc[root] = timer
            timer += 1
            continue
        # frame: (v, parent, iterator index)
        stack = [(root, -1, 0)]
        root_children = 0
        while stack:
            v, parent, i = stack.pop()
            if i == 0:
                disc[v] = low[v] = timer
                timer += 1
            nbrs = G.neighbours(v)
            advanced = False
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if w == parent:
                    continue
                if not disc[w]:
                    estack.append((v, w))
                    stack.append((v, parent, i))
                    stack.append((w, v, 0))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            # post-visit: propagate low to the parent frame; pop finished block
            if stack:
                pv = stack[-1][0]
                if low[v] < low[pv]:
                    low[pv] = low[v]
                if low[v] >= disc[pv]:
                    comp = []
                    while estack:
                        e = estack.pop()
                        comp.append(e)
                        if e == (pv, v):
                            break
                    vs = sorted({x for e in comp for x in e})
                    es = tuple(sorted(tuple(sorted(e)) for e in comp))
                    blocks.append(Block(tuple(vs), es))
                    if pv != root:
                        cuts.add(pv)
        if root_children > 1:
            cuts.add(root)
    return blocks, frozenset(cuts)


# -- contraction ------------------------------------------------------------


def contract_set(G: Graph, S: Iterable[int]) -> Graph:
    """Contract the connected set S to one vertex (placed last), keeping the graph simple.

    Remaining vertices keep their relative order as 0..n-|S|-1; the contracted
    vertex gets id n-|S|.  Raises if G[S] is disconnected.
    """
    S = sorted(set(S))
    if not S:
        raise DefclustError("cannot contract an empty set")
    sub, _ = G.induced_subgraph(S)
    if not is_connected(sub):
        raise DefclustError("contract_set: G[S] is not connected")
    keep = [v for v in range(G.n) if v not in set(S)]
    idx = {o: i for i, o in enumerate(keep)}
    new = len(keep)
    sset = set(S)
    edges = set()
    for u, v in G.edges():
        iu = idx[u] if u in idx else new
        iv = idx[v] if v in idx else new
        if iu != iv:
            edges.add((min(iu, iv), max(iu, iv)))
    return Graph(new + 1, edges)


def line_graph(G: Graph) -> Graph:
    """Line graph; vertex i is the i-th edge of G in lexicographic order."""
    es = list(G.edges())
    idx = {e: i for i, e in enumerate(es)}
    out = set()
    for v in range(G.n):
        nb = G.neighbours(v)
        for a, b in combinations(nb, 2):
            e1 = idx[(min(v, a), max(v, a))]
            e2 = idx[(min(v, b), max(v, b))]
            out.add((min(e1, e2), max(e1, e2)))
    return Graph(len(es), out)


# -- maximum average degree --------------------------------------------------


def mad_exact(G: Graph) -> Fraction:
    """max over non-empty subgraphs H of 2|E(H)|/|V(H)|, as an exact rational.

    Computed as twice the maximum-density subgraph value via min-cut
    feasibility tests (Goldberg's network) over a binary search, with the
    final value snapped to the unique rational of denominator <= n in the
    bracketing interval.  Exact rational arithmetic throughout; never floats.
    """
    n, m = G.n, G.m
    if n == 0 or m == 0:
        return Fraction(0)

    def denser_than(g: Fraction) -> bool:
        # True iff some vertex set S has e(S) - g|S| > 0.
        # Network: s -> v (cap m); v -> t (cap m + 2g - deg v); u <-> v (cap 1).
        s, t = n, n + 1
        caps: dict[tuple[int, int], Fraction] = {}
        for v in range(n):
            caps[(s, v)] = Fraction(m)
            caps[(v, t)] = Fraction(m) + 2 * g - G.degree(v)
        for u, v in G.edges():
            caps[(u, v)] = Fraction(1)
            caps[(v, u)] = Fraction(1)
        value, _ = flow.max_flow(n + 2, caps, s, t)
        return value < Fraction(m) * n

    lo, hi = Fraction(0), Fraction(m)  # density in (lo, hi]; predicate(g) <=> density > g
    if not denser_than(lo):
        return Fraction(0)
    gap = Fraction(1, 4 * n * n)
    while hi - lo > gap:
        mid = (lo + hi) / 2
        if denser_than(mid):
            lo = mid
        else:
            hi = mid
    dstar = ((lo + hi) / 2).limit_denominator(n)
    # sanity: density > dstar must be infeasible, > dstar - 1/n^2 feasible
    assert not denser_than(dstar)
    assert denser_than(dstar - Fraction(1, n * n))
    return 2 * dstar


def mad_bruteforce(G: Graph, cap: int = 20) -> Fraction:
    """Subset-enumeration oracle for mad_exact (n <= cap)."""
    from .errors import OracleCapExceeded

    if G.n > cap:
        raise OracleCapExceeded("mad_bruteforce", G.n, cap)
    if G.n == 0:
        return Fraction(0)
    best = Fraction(0)
    verts = list(range(G.n))
    for r in range(1, G.n + 1):
        for sub in combinations(verts, r):
            ss = set(sub)
            e = sum(1 for u in sub for w in G.neighbours(u) if w > u and w in ss)
            d = Fraction(2 * e, r)
            if d > best:
                best = d
    return best


def degeneracy(G: Graph) -> int:
    """Max over subgraphs of the minimum degree (classic peeling)."""
    degs = [G.degree(v) for v in range(G.n)]
    alive = set(range(G.n))
    best = 0
    while alive:
        v = min(alive, key=lambda x: (degs[x], x))
        best = max(best, degs[v])
        alive.remove(v)
        for w in G.neighbours(v):
            if w in alive:
                degs[w] -= 1
    return best


def girth(G: Graph) -> Optional[int]:
    """Length of a shortest cycle, or None for forests (BFS from every vertex)."""
    best: Optional[int] = None
    for r in range(G.n):
        dist = {r: 0}
        parent = {r: -1}
        frontier = [r]
        while frontier:
            nxt = []
            for v in frontier:
                for w in G.neighbours(v):
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        nxt.append(w)
                    elif w != parent[v] and dist[w] >= dist[v]:
                        cyc = dist[v] + dist[w] + 1
                        if best is None or cyc < best:
                            best = cyc
            frontier = nxt
    return best


# -- embedded types ----------------------------------------------------------


@dataclass(frozen=True)
class PlaneTriangulation:
    """Plane graph given by its internal (triangular) face list and outer cycle.

    Validated on construction: Euler's formula for the implied embedding,
    all internal faces triangles, every edge on exactly two faces counting
    the outer one.  Embeddings are inputs throughout the package; nothing
    here computes one from an abstract graph.
    """

    graph: Graph
    faces: tuple[tuple[int, int, int], ...]
    outer: tuple[int, ...]

    def __post_init__(self):
        G = self.graph
        n, me = G.n, G.m
        f = len(self.faces) + 1
        if n - me + f != 2:
            raise DefclustError(f"Euler check failed: n={n} m={me} f={f}")
        count: dict[tuple[int, int], int] = {}

        def bump(u, v):
            e = (min(u, v), max(u, v))
            if not G.has_edge(u, v):
                raise DefclustError(f"face edge ({u},{v}) not in graph")
            count[e] = count.get(e, 0) + 1

        for face in self.faces:
            if len(set(face)) != 3:
                raise DefclustError(f"internal face {face} is not a triangle")
            a, b, c = face
            bump(a, b)
            bump(b, c)
            bump(a, c)
        if len(self.outer) < 3 or len(set(self.outer)) != len(self.outer):
            raise DefclustError("outer cycle must be a simple cycle")
        for i in range(len(self.outer)):
            bump(self.outer[i], self.outer[(i + 1) % len(self.outer)])
        for e in G.edges():
            if count.get(e, 0) != 2:
                raise DefclustError(f"edge {e} lies on {count.get(e, 0)} faces, expected 2")


@dataclass(frozen=True)
class TPartition:
    """Tree-indexed partition of a host graph's vertices (bags may be empty)."""

    tree: Graph
    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.bags) != self.tree.n:
            raise DefclustError("one bag per tree node required")
        if self.tree.n > 1 and (not is_connected(self.tree) or self.tree.m != self.tree.n - 1):
            raise DefclustError("index graph is not a tree")

    def validate_partition(self, G: Graph) -> None:
        seen: set[int] = set()
        for bag in self.bags:
            if seen & bag:
                raise DefclustError("bags overlap")
            seen |= bag
        if seen != set(range(G.n)):
            raise DefclustError("bags do not cover V(G)")

    def node_of(self) -> dict[int, int]:
        return {v: x for x, bag in enumerate(self.bags) for v in bag}

    def crossing_edges(self, G: Graph, tree_edge: tuple[int, int]) -> list[tuple[int, int]]:
        """Host edges crossing the given tree edge (the set E(G,T,e))."""
        x, y = tree_edge
        if not self.tree.has_edge(x, y):
            raise DefclustError(f"({x},{y}) is not a tree edge")
        # side of x in tree - xy
        side = {x}
        stack = [x]
        while stack:
            a = stack.pop()
            for b in self.tree.neighbours(a):
                if b == y and a == x:
                    continue
                if b not in side:
                    side.add(b)
                    stack.append(b)
        vx = {v for node in side for v in self.bags[node]}
        return [(u, v) for u, v in G.edges() if (u in vx) != (v in vx)]

    def adhesion(self, G: Graph) -> int:
        if self.tree.n <= 1:
            return 0
        return max(len(self.crossing_edges(G, e)) for e in self.tree.edges())
