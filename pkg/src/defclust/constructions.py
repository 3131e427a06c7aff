"""Generators for the extremal constructions used to certify lower bounds.

Deterministic vertex layouts throughout: recursive constructions place the
copies first (block by block, in order) and the dominant vertex last, so
``G.n - 1`` is always the root of a dominant-vertex construction.  The
randomized generator takes an explicit seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .colouring import ListAssignment
from .errors import DefclustError, OracleCapExceeded
from .graphs import Graph, PlaneTriangulation, girth

DEFAULT_XKC_CAP = 400
DEFAULT_GK_CAP = 400


def _disjoint_copies_plus_dominant(block: Graph, copies: int) -> Graph:
    m = block.n
    edges = []
    for i in range(copies):
        off = i * m
        edges.extend((off + u, off + v) for u, v in block.edges())
    root = copies * m
    edges.extend((v, root) for v in range(root))
    return Graph(root + 1, edges)


def standard_defect(h: int, d: int) -> Graph:
    """The standard example S(h,d): d+1 copies of S(h-1,d) under a dominant vertex.

    S(0,d) is a single vertex; S(1,d) = K_{1,d+1}.  |V| satisfies
    |S(h,d)| = 1 + (d+1)|S(h-1,d)|.
    """
    if h < 0 or d < 0:
        raise DefclustError("standard_defect needs h >= 0, d >= 0")
    if h == 0:
        return Graph(1)
    return _disjoint_copies_plus_dominant(standard_defect(h - 1, d), d + 1)


def standard_cluster(h: int, c: int) -> Graph:
    """The clustered standard example: S̄(1,c) = P_{c+1}; then c copies + dominant."""
    if h < 1 or c < 1:
        raise DefclustError("standard_cluster needs h >= 1, c >= 1")
    if h == 1:
        return Graph.path(c + 1)
    return _disjoint_copies_plus_dominant(standard_cluster(h - 1, c), c)


def kst_star(s: int, t: int) -> Graph:
    """K*_{s,t}: K_{s,t} plus one new vertex per pair of the s-side.

    Vertices: s-side 0..s-1, t-side s..s+t-1, then the C(s,2) pair vertices.
    """
    if s < 1 or t < 1:
        raise DefclustError("kst_star needs s,t >= 1")
    edges = [(i, s + j) for i in range(s) for j in range(t)]
    nxt = s + t
    for a, b in combinations(range(s), 2):
        edges.extend([(a, nxt), (b, nxt)])
        nxt += 1
    return Graph(nxt, edges)


@dataclass(frozen=True)
class MarkedTriangulation:
    """A plane triangulation with four boundary arcs a..b, b..c, c..d, d..a.

    Consecutive arcs share their corner vertex; opposite arcs are far apart.
    """

    tri: PlaneTriangulation
    arc_ab: tuple[int, ...]
    arc_bc: tuple[int, ...]
    arc_cd: tuple[int, ...]
    arc_da: tuple[int, ...]


def hex_grid(k: int) -> MarkedTriangulation:
    """Triangulated (k+1)x(k+1) grid patch with opposite arcs at distance >= k.

    Max degree 6; every internal face a triangle.  Vertex (x,y) has id
    x*(k+1)+y; arcs run along the four boundary sides.
    """
    if k < 2:
        raise DefclustError("hex_grid needs k >= 2")
    w = k + 1

    def vid(x, y):
        return x * w + y

    edges = []
    faces = []
    for x in range(w):
        for y in range(w):
            if x + 1 < w:
                edges.append((vid(x, y), vid(x + 1, y)))
            if y + 1 < w:
                edges.append((vid(x, y), vid(x, y + 1)))
            if x + 1 < w and y + 1 < w:
                edges.append((vid(x + 1, y), vid(x, y + 1)))
                faces.append((vid(x, y), vid(x + 1, y), vid(x, y + 1)))
                faces.append((vid(x + 1, y), vid(x + 1, y + 1), vid(x, y + 1)))
    outer = (
        [vid(x, 0) for x in range(w)]
        + [vid(k, y) for y in range(1, w)]
        + [vid(x, k) for x in range(k - 1, -1, -1)]
        + [vid(0, y) for y in range(k - 1, 0, -1)]
    )
    tri = PlaneTriangulation(Graph(w * w, edges), tuple(faces), tuple(outer))
    return MarkedTriangulation(
        tri,
        arc_ab=tuple(vid(x, 0) for x in range(w)),
        arc_bc=tuple(vid(k, y) for y in range(w)),
        arc_cd=tuple(vid(x, k) for x in range(k, -1, -1)),
        arc_da=tuple(vid(0, y) for y in range(k, -1, -1)),
    )


def outerplanar_gadget() -> Graph:
    """Fan of triangles (apex over P_6) that is not 2-colourable with defect 1.

    Transcribed from a drawing, so the defining property is certified by the
    exact oracle in the test suite rather than trusted; fig4_search provides
    the fallback search should the transcription ever fail certification.
    """
    apex = 6
    edges = [(i, i + 1) for i in range(5)] + [(i, apex) for i in range(6)]
    return Graph(7, edges)


def kkn_gadget(s: int, d: int) -> tuple[Graph, ListAssignment]:
    """K_{s,t} with t=(ds+1)*s^s and the list assignment defeating defect d.

    The s-side gets pairwise disjoint colour sets X_i of size s; every
    colour vector (c_1..c_s) in X_1 x..x X_s is given to ds+1 vertices of
    the t-side.
    """
    if s < 1 or d < 0:
        raise DefclustError("kkn_gadget needs s >= 1, d >= 0")
    t = (d * s + 1) * s**s
    G = Graph.complete_bipartite(s, t)
    x_sets = [tuple(range(i * s, (i + 1) * s)) for i in range(s)]
    lists: list[tuple[int, ...]] = [x_sets[i] for i in range(s)]
    from itertools import product

    for vec in product(*x_sets):
        lists.extend([tuple(vec)] * (d * s + 1))
    assert len(lists) == s + t
    return G, ListAssignment(lists)


def xkc_family(k: int, c: int, seed_choice, cap: int = DEFAULT_XKC_CAP) -> Graph:
    """One member of the X_{k,c} family, by a chosen operation sequence.

    ``seed_choice`` is ("path"|"star", op, op, ...) where each op is
    "prime" (dominant vertex over c copies, k -> k+1), "plus" (k-clique
    extension by k(c-1)+1 stable vertices, k -> k+1) or "plusplus"
    ((k-1)-clique extension by a path, k -> k+2).  Growth is explosive, so
    a size cap is enforced.
    """
    base, *ops = seed_choice
    if base == "path":
        G = Graph.path(c + 1)
    elif base == "star":
        G = Graph.star(c)
    else:
        raise DefclustError(f"unknown base {base!r}")
    level = 1
    for op in ops:
        if op == "prime":
            G = _disjoint_copies_plus_dominant(G, c)
            level += 1
        elif op == "plus":
            level += 1
            G = _clique_extension(G, level, level * (c - 1) + 1, path=False)
        elif op == "plusplus":
            level += 2
            G = _clique_extension(G, level - 1, (c * c - 1) * (level - 1) + (c + 1), path=True)
        else:
            raise DefclustError(f"unknown operation {op!r}")
        if G.n > cap:
            raise OracleCapExceeded("xkc_family", G.n, cap)
    if level != k:
        raise DefclustError(f"operation sequence reaches level {level}, not k={k}")
    return G


def _cliques_of_size(G: Graph, r: int) -> list[tuple[int, ...]]:
    out = []
    for cand in combinations(range(G.n), r):
        if all(G.has_edge(a, b) for a, b in combinations(cand, 2)):
            out.append(cand)
    return out


def _clique_extension(G: Graph, clique_size: int, added: int, path: bool) -> Graph:
    """Attach `added` new vertices (stable set or path) complete to every clique."""
    edges = list(G.edges())
    n = G.n
    for D in _cliques_of_size(G, clique_size):
        for j in range(added):
            for v in D:
                edges.append((v, n))
            if path and j > 0:
                edges.append((n - 1, n))
            n += 1
    return Graph(n, edges)


def gk_circumference_gadget(k: int, c: int, cap: int = DEFAULT_GK_CAP) -> Graph:
    """The circumference lower-bound family: G_2 = P_{c+1}; G_k hangs 2c-1
    copies of G_{k-1} complete to every consecutive pair of a fresh path."""
    if k < 2 or c < 1:
        raise DefclustError("gk gadget needs k >= 2, c >= 1")
    if k == 2:
        return Graph.path(c + 1)
    sub = gk_circumference_gadget(k - 1, c, cap=cap)
    edges = [(i, i + 1) for i in range(c)]
    n = c + 1
    for i in range(c):
        for _ in range(2 * c - 1):
            off = n
            edges.extend((off + u, off + v) for u, v in sub.edges())
            for v in range(sub.n):
                edges.append((i, off + v))
                edges.append((i + 1, off + v))
            n += sub.n
            if n > cap:
                raise OracleCapExceeded("gk_circumference_gadget", n, cap)
    return Graph(n, edges)


@dataclass(frozen=True)
class ThicknessWitness:
    graph: Graph
    parts: tuple[tuple[tuple[int, int], ...], ...]


def thickness_gadgets(n: int) -> ThicknessWitness:
    """1-subdivision of K_n with an explicit two-part planar decomposition.

    Vertex u<n is an original K_n vertex; the subdivision vertex of edge
    (u,v) follows.  Each witness part takes one half of every subdivided
    edge, so both parts are star forests (planar); the union covers all
    edges.
    """
    if n < 3:
        raise DefclustError("thickness_gadgets needs n >= 3")
    edges = []
    part1, part2 = [], []
    nxt = n
    for u, v in combinations(range(n), 2):
        e1, e2 = (u, nxt), (v, nxt)
        edges.extend([e1, e2])
        part1.append(e1)
        part2.append(e2)
        nxt += 1
    return ThicknessWitness(Graph(nxt, edges), (tuple(part1), tuple(part2)))


def standard_defect_thickness_partition(k: int, d: int) -> list[set[tuple[int, int]]]:
    """Edge partition of S(2k,d) into k planar parts.

    Layer j takes, for each S(2k-2j,d) block, every edge at the block root
    and every edge at the roots of its d+1 child copies; what remains is a
    disjoint union of S(2k-2j-2,d) blocks handled by layer j+1.  Each layer
    is a vertex-disjoint union of near-K_{2,m} pieces, hence planar.
    """
    if k < 1:
        raise DefclustError("k >= 1 required")
    G = standard_defect(2 * k, d)
    parts: list[set[tuple[int, int]]] = [set() for _ in range(k)]

    def fill(vertices: list[int], h: int, level: int) -> None:
        # vertices lists the S(h,d) block in construction order; root is last
        if h <= 0:
            return
        root = vertices[-1]
        for v in vertices[:-1]:
            parts[level].add(_e(root, v))
        sub_n = (len(vertices) - 1) // (d + 1)
        for i in range(d + 1):
            b = vertices[i * sub_n : (i + 1) * sub_n]
            sub_root = b[-1]
            for v in b[:-1]:
                parts[level].add(_e(sub_root, v))
            sub_sub = (len(b) - 1) // (d + 1)
            for j in range(d + 1):
                fill(b[j * sub_sub : (j + 1) * sub_sub], h - 2, level + 1)

    fill(list(range(G.n)), 2 * k, 0)
    covered: set[tuple[int, int]] = set().union(*parts)
    assert covered == set(G.edges()), "thickness partition must cover E(G)"
    return parts


def _e(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def high_girth_regular(r: int, g: int, seed: int = 0, tries: int = 4000) -> Graph:
    """An r-regular graph with girth > g, by seeded random sampling with
    local edge swaps until the girth check passes.

    The existence proof behind this is non-constructive, so this generator
    is honest about being randomized: same seed, same graph; the retry
    budget exhausting raises instead of degrading the guarantee.
    """
    if r < 2 or g < 2:
        raise DefclustError("high_girth_regular needs r >= 2, g >= 2")
    rng = random.Random(seed)
    n = max(r + 1, 2 * (g + 1))
    if (n * r) % 2:
        n += 1
    for attempt in range(tries):
        G = _random_regular(rng, n, r)
        if G is None:
            continue
        G = _swap_out_short_cycles(rng, G, r, g)
        gg = girth(G)
        if gg is None or gg > g:
            return G
        if attempt % 40 == 39:
            n += 2 if r % 2 else 1  # larger graphs have fewer short cycles
            if (n * r) % 2:
                n += 1
    raise OracleCapExceeded("high_girth_regular retries", tries, tries)


def _random_regular(rng: random.Random, n: int, r: int):
    """One pairing-model sample; None when it collides (caller retries)."""
    stubs = [v for v in range(n) for _ in range(r)]
    rng.shuffle(stubs)
    edges = set()
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v or (min(u, v), max(u, v)) in edges:
            return None
        edges.add((min(u, v), max(u, v)))
    return Graph(n, edges)


def _swap_out_short_cycles(rng: random.Random, G: Graph, r: int, g: int) -> Graph:
    """Try a few 2-opt swaps to break cycles of length <= g."""
    for _ in range(200):
        gg = girth(G)
        if gg is None or gg > g:
            return G
        edges = list(G.edges())
        e1 = rng.choice(edges)
        e2 = rng.choice(edges)
        a, b = e1
        c, d = e2
        if len({a, b, c, d}) < 4:
            continue
        if G.has_edge(a, c) or G.has_edge(b, d):
            continue
        newe = [e for e in edges if e not in (e1, e2)] + [_e(a, c), _e(b, d)]
        G = Graph(G.n, newe)
    return G


# -- random instance generators (test corpora and the CLI `gen` command) -----


def random_plane_triangulation(n: int, seed: int = 0, flips: int | None = None) -> PlaneTriangulation:
    """Random maximal planar graph with its face list, outer face a triangle.

    Built by stacking vertices into random faces, then randomized diagonal
    flips for variety; both steps preserve the triangulation invariants.
    """
    if n < 3:
        raise DefclustError("triangulation needs n >= 3")
    rng = random.Random(seed)
    faces = {(0, 1, 2)}
    outer = (0, 1, 2)
    for v in range(3, n):
        f = sorted(faces)[rng.randrange(len(faces))]
        a, b, c = f
        faces.remove(f)
        faces.update({tuple(sorted((a, b, v))), tuple(sorted((a, c, v))), tuple(sorted((b, c, v)))})
    if flips is None:
        flips = 4 * n
    faces_by_edge: dict[tuple[int, int], list] = {}

    def rebuild_index():
        faces_by_edge.clear()
        for f in faces:
            a, b, c = f
            for e in ((a, b), (b, c), (a, c)):
                faces_by_edge.setdefault(e, []).append(f)

    rebuild_index()
    for _ in range(flips):
        # only edges on two internal faces are flippable; boundary edges have one
        inner = sorted(e for e, fs in faces_by_edge.items() if len(fs) == 2)
        if not inner:
            break
        e = inner[rng.randrange(len(inner))]
        f1, f2 = faces_by_edge[e]
        u, v = e
        w = next(x for x in f1 if x not in e)
        z = next(x for x in f2 if x not in e)
        if (min(w, z), max(w, z)) in faces_by_edge:
            continue
        faces.discard(f1)
        faces.discard(f2)
        faces.add(tuple(sorted((w, z, u))))
        faces.add(tuple(sorted((w, z, v))))
        rebuild_index()
    edges = set()
    for f in faces:
        a, b, c = f
        edges.update({(a, b), (b, c), (a, c)})
    # the outer face is the untouched starting triangle (0,1,2)
    internal = tuple(sorted(faces))
    return PlaneTriangulation(Graph(n, edges), internal, (0, 1, 2))


def random_maximal_outerplanar(n: int, seed: int = 0) -> Graph:
    """Random triangulation of a convex polygon on vertices 0..n-1."""
    if n < 3:
        raise DefclustError("outerplanar generator needs n >= 3")
    rng = random.Random(seed)
    edges = [(i, (i + 1) % n) for i in range(n)]

    def tri(lo: int, hi: int) -> None:
        # triangulate the polygon chord lo..hi (indices along the cycle)
        if hi - lo < 2:
            return
        mid = rng.randrange(lo + 1, hi)
        if mid - lo >= 2:
            edges.append((lo, mid))
        if hi - mid >= 2:
            edges.append((mid, hi))
        tri(lo, mid)
        tri(mid, hi)

    tri(0, n - 1)
    return Graph(n, edges)


def random_planar(n: int, seed: int = 0, keep: float = 0.75) -> Graph:
    """Random planar graph: a random triangulation with edges deleted."""
    tri = random_plane_triangulation(n, seed=seed)
    rng = random.Random(seed + 101)
    edges = [e for e in tri.graph.edges() if rng.random() < keep]
    return Graph(n, edges)


def random_graph_max_degree(n: int, delta: int, seed: int = 0, tries_per_edge: int = 3) -> Graph:
    """Random graph with max degree <= delta (edge-insertion sampling)."""
    rng = random.Random(seed)
    deg = [0] * n
    edges = set()
    for _ in range(tries_per_edge * n * delta // 2):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        e = _e(u, v)
        if e in edges or deg[u] >= delta or deg[v] >= delta:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return Graph(n, edges)
