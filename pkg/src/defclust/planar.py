"""Engines whose correctness depends on a plane embedding.

Embeddings are inputs: :class:`PlaneTriangulation` carries its face list
and nothing here computes an embedding from an abstract graph.  The Poh
recursion keeps an explicit sphere-triangulation face list through its
cycle contractions; the Hex extraction follows its proof's dual-walk
construction literally, asserting the degree structure of the dual graph
on every run.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

from .colouring import Colouring, audit
from .constructions import MarkedTriangulation
from .errors import DefclustError, HypothesisViolation, OracleCapExceeded
from .graphs import (
    Graph,
    PlaneTriangulation,
    bfs_layering,
    connected_components,
)
from .oracle import exists_colouring_defect, has_minor


# -- outerplanar two-colouring ---------------------------------------------------


def outerplanar_two_colour(G: Graph) -> Colouring:
    """BFS-layer parity colouring: 2 colours, every monochromatic component
    a path (defect <= 2) whenever G is outerplanar.

    A layer inducing a vertex of degree >= 3 or a cycle witnesses a K_{2,3}
    or K_4 minor, i.e. a violated outerplanarity hypothesis; the offending
    layer index is reported.
    """
    colour: list[Optional[int]] = [None] * G.n
    for comp in connected_components(G):
        sub, old = G.induced_subgraph(comp)
        lay = bfs_layering(sub, 0)
        for i, layer in enumerate(lay.layers):
            lset = set(layer)
            inner = [sum(1 for w in sub.neighbours(v) if w in lset) for v in layer]
            edges = sum(inner) // 2
            if any(dg >= 3 for dg in inner) or edges >= len(layer):
                raise HypothesisViolation(
                    f"outerplanarity hypothesis violated: BFS layer {i} induces "
                    "a vertex of degree >= 3 or a cycle (K_{2,3} or K_4 minor)",
                    witness=tuple(old[v] for v in layer),
                )
            for v in layer:
                colour[old[v]] = i % 2
    chi = Colouring(colour)
    cert = audit(G, chi)
    assert cert.all_paths and cert.defect <= 2
    return chi


# -- Poh's three-colouring (see _poh.py for the plane-map machinery) ----------

from ._poh import poh_three_colour  # noqa: E402,F401


# -- genus-bound defective three-colouring ----------------------------------------


def genus_defect_bound(g: int) -> int:
    """d = max(12, ceil(sqrt(6g)) + 7)."""
    if g < 0:
        raise DefclustError("genus must be >= 0")
    if g == 0:
        return 12
    s = 6 * g
    r = int(s**0.5)
    while r * r < s:
        r += 1
    while (r - 1) * (r - 1) >= s:
        r -= 1
    return max(12, r + 7)


def genus_three_colour(G: Graph, g: int) -> Colouring:
    """3-colouring with defect max(12, ceil(sqrt(6g))+7) for Euler genus <= g.

    Peels degree-<=2 vertices and light edges among the low-degree set; at
    a leaf the high-degree set B is split between two colours and the
    stable low set takes the third.  A leaf where B exceeds the counting
    bound (d-11)|B| <= max(12(g-2), 0) reports a genus-hypothesis
    violation.
    """
    d = genus_defect_bound(g)
    alive = set(range(G.n))
    deg = {v: G.degree(v) for v in alive}
    steps: list[tuple] = []
    leaf_B: list[int] = []
    leaf_A: list[int] = []
    while alive:
        v = min((v for v in alive if deg[v] <= 2), default=None)
        if v is not None:
            steps.append(("vertex", v))
            alive.remove(v)
            for w in G.neighbours(v):
                if w in alive:
                    deg[w] -= 1
            continue
        light = None
        for u in sorted(alive):
            if deg[u] > d:
                continue
            for w in G.neighbours(u):
                if w > u and w in alive and deg[w] <= d:
                    light = (u, w)
                    break
            if light:
                break
        if light is not None:
            steps.append(("edge", *light))
            u, w = light
            deg[u] -= 1
            deg[w] -= 1
            continue
        # leaf: A = degree <= d (stable), B = rest
        leaf_A = sorted(v for v in alive if deg[v] <= d)
        leaf_B = sorted(v for v in alive if deg[v] > d)
        bound = max(12 * (g - 2), 0)
        if (d - 11) * len(leaf_B) > bound:
            raise HypothesisViolation(
                f"genus hypothesis violated: |B| = {len(leaf_B)} exceeds "
                f"the counting bound {bound}/(d-11) at a leaf",
                witness=tuple(leaf_B),
            )
        break

    colour: list[Optional[int]] = [None] * G.n
    half = (len(leaf_B) + 1) // 2
    for i, v in enumerate(leaf_B):
        colour[v] = 0 if i < half else 1
    for v in leaf_A:
        colour[v] = 2
    removed: set[tuple[int, int]] = {(s[1], s[2]) for s in steps if s[0] == "edge"}
    present = [colour[v] is not None for v in range(G.n)]
    for step in reversed(steps):
        if step[0] == "vertex":
            v = step[1]
            taken = {
                colour[w]
                for w in G.neighbours(v)
                if present[w] and (min(v, w), max(v, w)) not in removed
            }
            colour[v] = min(c for c in (0, 1, 2) if c not in taken)
            present[v] = True
        else:
            removed.discard((step[1], step[2]))
    chi = Colouring(colour)
    cert = audit(G, chi)
    assert cert.k <= 3 and cert.defect <= d
    return chi


# -- Hex lemma extraction -----------------------------------------------------------


def gale_extract(marked: MarkedTriangulation, chi: Colouring) -> list[int]:
    """A monochromatic path joining opposite boundary arcs, for any 2-colouring.

    Executes the dual construction literally: four corner vertices w,x,y,z
    are attached to the arcs and 2-coloured, the dual graph H on internal
    faces joins faces across bichromatic edges, and the unique path leaving
    a special corner face is walked to another corner.  The degree pattern
    of H (specials 1, everything else 0 or 2) is asserted on every run.
    """
    tri = marked.tri
    G = tri.graph
    if len(chi) != G.n:
        raise DefclustError("colouring domain mismatch")
    if any(chi[v] not in (0, 1) for v in range(G.n)):
        raise DefclustError("gale_extract needs a 2-colouring with colours {0,1}")
    blue, red = 0, 1
    n = G.n
    w, xx, y, z = n, n + 1, n + 2, n + 3
    col = list(chi.values) + [blue, red, blue, red]  # w, x, y, z

    faces: list[tuple[int, ...]] = [tuple(f) for f in tri.faces]

    def fan(centre: int, arc: Sequence[int]):
        for i in range(len(arc) - 1):
            faces.append(tuple(sorted((centre, arc[i], arc[i + 1]))))

    fan(w, marked.arc_ab)
    fan(xx, marked.arc_bc)
    fan(y, marked.arc_cd)
    fan(z, marked.arc_da)
    a_corner = marked.arc_ab[0]
    b_corner = marked.arc_bc[0]
    c_corner = marked.arc_cd[0]
    d_corner = marked.arc_da[0]
    special = {
        "A": tuple(sorted((a_corner, w, z))),
        "B": tuple(sorted((b_corner, xx, w))),
        "C": tuple(sorted((c_corner, xx, y))),
        "D": tuple(sorted((d_corner, y, z))),
    }
    for f in special.values():
        faces.append(f)

    # adjacency between internal faces across bichromatic edges
    edge_faces: dict[tuple[int, int], list[int]] = {}
    for idx, f in enumerate(faces):
        for u, v in combinations(sorted(f), 2):
            edge_faces.setdefault((u, v), []).append(idx)
    hadj: dict[int, list[int]] = {i: [] for i in range(len(faces))}
    for (u, v), fs in edge_faces.items():
        if len(fs) == 2 and col[u] != col[v]:
            hadj[fs[0]].append(fs[1])
            hadj[fs[1]].append(fs[0])

    sp_idx = {name: faces.index(f) for name, f in special.items()}
    for i in range(len(faces)):
        degs = len(hadj[i])
        if i in sp_idx.values():
            assert degs == 1, "special faces have dual degree 1"
        else:
            assert degs in (0, 2), "non-special faces have dual degree 0 or 2"

    # walk from A to another special face
    start = sp_idx["A"]
    specials_by_idx = {v: k for k, v in sp_idx.items()}
    walk_faces = [start]
    prev, cur = None, start
    while True:
        nxt = [f for f in hadj[cur] if f != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        walk_faces.append(cur)
        if cur in specials_by_idx:
            break
    end_name = specials_by_idx[walk_faces[-1]]
    assert end_name in ("B", "C", "D")

    if end_name in ("B",):
        arcs = (marked.arc_da, marked.arc_bc)
    elif end_name == "D":
        arcs = (marked.arc_ab, marked.arc_cd)
    else:  # A-C pairing cannot occur for non-crossing dual paths, but stay safe
        arcs = (marked.arc_ab, marked.arc_cd)

    for want in (red, blue):
        path = _mono_arc_path(G, chi, faces, walk_faces, arcs, want)
        if path is not None:
            return path
    raise AssertionError("Hex walk failed to yield a monochromatic arc-to-arc path")


def _mono_arc_path(G, chi, faces, walk_faces, arcs, want):
    members = {
        v for i in walk_faces for v in faces[i] if v < G.n and chi[v] == want
    }
    src = [v for v in members if v in set(arcs[0])]
    dst = set(arcs[1]) & members
    if not src or not dst:
        return None
    # BFS inside G[members]
    parent = {v: None for v in src}
    frontier = sorted(src)
    while frontier:
        nxt = []
        for v in frontier:
            if v in dst:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return list(reversed(path))
            for u in G.neighbours(v):
                if u in members and u not in parent:
                    parent[u] = v
                    nxt.append(u)
        frontier = sorted(nxt)
    return None


# -- smallest outerplanar witness ---------------------------------------------------


def fig4_search(max_n: int = 7) -> Graph:
    """Smallest outerplanar graph that is not 2-colourable with defect 1.

    Enumerates subgraphs of triangulated polygons (every outerplanar graph
    extends to one on the same vertex set); a minimal witness has minimum
    degree >= 2 since a degree-<=1 vertex could be coloured opposite its
    neighbour.  Result order: vertex count, then edge count, then
    lexicographic edge list.
    """
    if max_n > 8:
        raise OracleCapExceeded("fig4_search", max_n, 8)
    for n in range(3, max_n + 1):
        best: Optional[tuple] = None
        for tri_edges in _polygon_triangulations(n):
            extra = [e for e in tri_edges]
            for mask in range(1 << len(extra)):
                edges = [e for i, e in enumerate(extra) if mask >> i & 1]
                degs = [0] * n
                for u, v in edges:
                    degs[u] += 1
                    degs[v] += 1
                if any(dg < 2 for dg in degs):
                    continue
                key = (len(edges), tuple(sorted(edges)))
                if best is not None and key >= best[0]:
                    continue
                g = Graph(n, edges)
                if not exists_colouring_defect(g, 2, 1):
                    best = (key, g)
        if best is not None:
            g = best[1]
            assert not has_minor(g, Graph.complete(4))
            assert not has_minor(g, Graph.complete_bipartite(2, 3))
            return g
    raise OracleCapExceeded("fig4_search: no witness found up to", max_n, max_n)


def _polygon_triangulations(n: int):
    """Edge sets of all triangulations of the convex n-gon 0..n-1."""
    base = [(i, (i + 1) % n) for i in range(n)]

    def rec(lo: int, hi: int):
        # all chord sets triangulating the polygon path lo..hi
        if hi - lo < 2:
            yield []
            return
        for mid in range(lo + 1, hi):
            left_chord = [(lo, mid)] if mid - lo >= 2 else []
            right_chord = [(mid, hi)] if hi - mid >= 2 else []
            for l in rec(lo, mid):
                for r in rec(mid, hi):
                    yield left_chord + right_chord + l + r

    seen = set()
    for chords in rec(0, n - 1):
        edges = tuple(sorted(set(base) | {(min(u, v), max(u, v)) for u, v in chords}))
        if edges not in seen:
            seen.add(edges)
            yield edges
