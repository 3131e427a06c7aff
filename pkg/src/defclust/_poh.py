"""The path-component 3-colouring recursion on plane maps.

Contracting the separating cycle can create parallel edges and non-triangular
merged faces, so the recursion runs on a plane multigraph represented by
rotation systems (darts with cyclic order at each vertex).  At each level the
map is normalized the way the proof's "add edges" step does: bigons collapse
to single edges and longer faces are re-triangulated with diagonals.  Heavy
assertions validate every rebuilt map (rotations close, faces triangulate,
Euler count) so a bookkeeping slip fails loudly instead of colouring wrong.
"""

from __future__ import annotations

from typing import Optional

from .colouring import Colouring, audit
from .errors import DefclustError
from .graphs import Graph, PlaneTriangulation


class _Pmap:
    """Plane multigraph: rot[v] lists out-darts in cyclic order; twin(d) = d^1."""

    __slots__ = ("n", "rot", "origin", "target")

    def __init__(self, n: int, rot, origin, target, check: bool = True):
        self.n = n
        self.rot = rot
        self.origin = origin
        self.target = target
        if check:
            self.validate()

    def twin(self, d: int) -> int:
        return d ^ 1

    def validate(self) -> None:
        for v, ds in enumerate(self.rot):
            for d in ds:
                assert self.origin[d] == v, "rotation lists a foreign dart"
        m2 = sum(len(ds) for ds in self.rot)
        f = len(self.faces())
        assert self.n - m2 // 2 + f == 2, f"Euler check failed: n={self.n} m={m2 // 2} f={f}"

    def rot_next(self, d: int) -> int:
        ds = self.rot[self.origin[d]]
        return ds[(ds.index(d) + 1) % len(ds)]

    def face_next(self, d: int) -> int:
        return self.rot_next(self.twin(d))

    def faces(self) -> list[list[int]]:
        """Faces as dart orbits of the face-successor permutation."""
        seen: set[int] = set()
        out = []
        for v in range(self.n):
            for d in self.rot[v]:
                if d in seen:
                    continue
                orbit = []
                cur = d
                while cur not in seen:
                    seen.add(cur)
                    orbit.append(cur)
                    cur = self.face_next(cur)
                assert cur == d, "face tracing did not close"
                out.append(orbit)
        return out

    def simple_adj(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for v in range(self.n):
            for d in self.rot[v]:
                adj[v].add(self.target[d])
        return adj


def _orient_faces(faces: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Coherently orient unordered triangle triples (sphere is orientable)."""
    edge_faces: dict[tuple[int, int], list[int]] = {}
    for i, f in enumerate(faces):
        a, b, c = f
        for e in ((a, b), (b, c), (a, c)):
            edge_faces.setdefault((min(e), max(e)), []).append(i)
    oriented: dict[int, tuple[int, int, int]] = {0: tuple(faces[0])}
    stack = [0]
    while stack:
        i = stack.pop()
        a, b, c = oriented[i]
        for u, v in ((a, b), (b, c), (c, a)):
            e = (min(u, v), max(u, v))
            for j in edge_faces[e]:
                if j == i or j in oriented:
                    continue
                w = next(x for x in faces[j] if x not in e)
                # neighbour must traverse the shared edge oppositely: v -> u
                oriented[j] = (v, u, w)
                stack.append(j)
    assert len(oriented) == len(faces), "face adjacency is disconnected"
    return [oriented[i] for i in range(len(faces))]


def _pmap_from_faces(n: int, faces: list[tuple[int, int, int]]) -> _Pmap:
    oriented = _orient_faces(faces)
    darts: dict[tuple[int, int, int], int] = {}
    origin: list[int] = []
    target: list[int] = []
    # one dart pair per undirected face-edge slot; triangulations are
    # edge-simple here, so (u, v) identifies the pair
    pair_ids: dict[tuple[int, int], int] = {}
    for f in oriented:
        a, b, c = f
        for u, v in ((a, b), (b, c), (c, a)):
            e = (min(u, v), max(u, v))
            if e not in pair_ids:
                pair_ids[e] = len(origin)
                origin.extend([e[0], e[1]])
                target.extend([e[1], e[0]])
    def dart(u, v):
        base = pair_ids[(min(u, v), max(u, v))]
        return base if origin[base] == u else base + 1

    succ: dict[int, int] = {}
    for f in oriented:
        a, b, c = f
        for p, v, q in ((a, b, c), (b, c, a), (c, a, b)):
            # corner p -> v -> q: rotation successor of (v -> p) is (v -> q)
            succ[dart(v, p)] = dart(v, q)
    rot: list[list[int]] = [[] for _ in range(n)]
    placed: set[int] = set()
    for d in range(len(origin)):
        if d in placed:
            continue
        v = origin[d]
        orbit = [d]
        cur = succ[d]
        while cur != d:
            orbit.append(cur)
            cur = succ[cur]
        assert not rot[v], "vertex rotation split into several cycles"
        rot[v] = orbit
        placed.update(orbit)
    return _Pmap(n, rot, origin, target)


# -- map surgery ---------------------------------------------------------------


def _delete_parallels(pm: _Pmap) -> _Pmap:
    """Delete duplicate edge copies; each deletion merges the two faces at
    the deleted copy.  The simple adjacency is unchanged."""
    while True:
        seen: dict[tuple[int, int], int] = {}
        dup = None
        for v in range(pm.n):
            for d in pm.rot[v]:
                o, t = pm.origin[d], pm.target[d]
                if o > t:
                    continue
                if (o, t) in seen:
                    dup = d
                    break
                seen[(o, t)] = d
            if dup is not None:
                break
        if dup is None:
            return pm
        for h in (dup, pm.twin(dup)):
            pm.rot[pm.origin[h]].remove(h)
        pm = _Pmap(pm.n, pm.rot, pm.origin, pm.target, check=False)


def _add_diagonal(pm: _Pmap, face: list[int], i: int, j: int) -> None:
    """Insert a diagonal between the origins of face[i] and face[j] inside the face."""
    m = len(face)
    u, w = pm.origin[face[i]], pm.origin[face[j]]
    nd = len(pm.origin)
    pm.origin.extend([u, w])
    pm.target.extend([w, u])
    prev_i = pm.twin(face[(i - 1) % m])
    prev_j = pm.twin(face[(j - 1) % m])
    ru = pm.rot[u]
    ru.insert(ru.index(prev_i) + 1, nd)
    rw = pm.rot[w]
    rw.insert(rw.index(prev_j) + 1, nd + 1)


def _triangulate(pm: _Pmap) -> _Pmap:
    """Split every face longer than 3 with non-duplicating diagonals.

    A merged face's corners fall into groups that were separated by the
    deleted parallel copy, so a pair of distinct non-adjacent corners
    always exists; the assertion guards that argument.
    """
    while True:
        face = next((f for f in pm.faces() if len(f) > 3), None)
        if face is None:
            pm.validate()
            return pm
        adj = pm.simple_adj()
        m = len(face)
        pick = None
        for gap in range(2, m - 1):
            for i in range(m):
                j = (i + gap) % m
                u = pm.origin[face[i]]
                w = pm.origin[face[j]]
                if u != w and w not in adj[u]:
                    pick = (i, j)
                    break
            if pick:
                break
        assert pick is not None, "no simple diagonal available in a merged face"
        _add_diagonal(pm, face, *pick)


def _make_simple_triangulation(pm: _Pmap) -> _Pmap:
    """Normalize a plane multigraph into a simple triangulation, the way the
    proof's 'delete parallel copies, then add edges' step does."""
    pm = _delete_parallels(pm)
    pm = _triangulate(pm)
    _check_triangular(pm)
    return pm


def _check_triangular(pm: _Pmap) -> None:
    assert all(len(f) == 3 for f in pm.faces()), "map must be triangulated"


# -- the recursion ----------------------------------------------------------------


def poh_three_colour(T: PlaneTriangulation) -> Colouring:
    """3 colours, every monochromatic component a path, on a plane triangulation.

    The recursion splits along a shortest induced cycle through the
    subdivision vertex of the marked edge, contracts the cycle on both
    sides, colours both quotients, and paints the cycle with the contracted
    vertex's colour.  A temporary apex closes a non-triangular outer face
    and is dropped afterwards (subpaths of paths are paths).
    """
    G = T.graph
    if G.n < 3:
        raise DefclustError("triangulation needs n >= 3")
    faces = [tuple(f) for f in T.faces]
    n = G.n
    if len(T.outer) == 3:
        faces.append(tuple(T.outer))
    else:
        apex = n
        n += 1
        out = T.outer
        for i in range(len(out)):
            faces.append((apex, out[i], out[(i + 1) % len(out)]))
    pm = _pmap_from_faces(n, faces)
    v1, v2 = min(G.edges())
    colour = _poh_map(pm, v1, v2, depth=0)
    chi = Colouring(colour[: G.n]).compact()
    cert = audit(G, chi)
    assert cert.k <= 3 and cert.all_paths and cert.defect <= 2
    return chi


def _poh_map(pm: _Pmap, v1: int, v2: int, depth: int) -> list[int]:
    # each level shrinks by >= 1 vertex (asserted in _contract_side)
    if pm.n <= 4:
        colour = [2] * pm.n
        colour[v1] = 0
        colour[v2] = 1
        return colour
    pm = _make_simple_triangulation(pm)

    # the two faces at one copy of the marked edge
    d0 = min(d for d in pm.rot[v1] if pm.target[d] == v2)
    face1 = _face_of(pm, d0)
    face2 = _face_of(pm, pm.twin(d0))
    a = next(pm.origin[d] for d in face1 if pm.origin[d] not in (v1, v2))
    b = next(pm.origin[d] for d in face2 if pm.origin[d] not in (v1, v2))
    assert a != b, "distinct apexes at the marked edge (n >= 5)"

    # G': remove the marked edge copy, add x in the v1-a-v2-b quadrilateral
    x = pm.n
    nd = len(pm.origin)
    pm.origin.extend([x, v1, x, a, x, v2, x, b])
    pm.target.extend([v1, x, a, x, v2, x, b, x])
    d_xv1, d_v1x = nd, nd + 1
    d_xa, d_ax = nd + 2, nd + 3
    d_xv2, d_v2x = nd + 4, nd + 5
    d_xb, d_bx = nd + 6, nd + 7
    i1 = pm.rot[v1].index(d0)
    pm.rot[v1][i1] = d_v1x
    i2 = pm.rot[v2].index(pm.twin(d0))
    pm.rot[v2][i2] = d_v2x
    # a's corner in face1 lies between darts a->v2 and a->v1
    da_v1 = next(d for d in face1 if pm.origin[d] == a)
    prev_a = pm.twin(face1[(face1.index(da_v1) - 1) % 3])
    pm.rot[a].insert(pm.rot[a].index(prev_a) + 1, d_ax)
    db_v2 = next(d for d in face2 if pm.origin[d] == b)
    prev_b = pm.twin(face2[(face2.index(db_v2) - 1) % 3])
    pm.rot[b].insert(pm.rot[b].index(prev_b) + 1, d_bx)
    pm.rot.append([d_xv1, d_xa, d_xv2, d_xb])
    pm2 = _Pmap(x + 1, pm.rot, pm.origin, pm.target, check=False)
    if not all(len(f) == 3 for f in pm2.faces()):
        # orientation of x's rotation depends on the global orientation sign
        pm2.rot[x] = [d_xv1, d_xb, d_xv2, d_xa]
        _check_triangular(pm2)
    pm2.validate()

    # shortest a-b path avoiding v1, v2, x
    adj = pm2.simple_adj()
    path = _bfs_path(adj, a, b, forbidden={v1, v2, x})
    assert path is not None, "3-connectivity guarantees the separating cycle"
    cyc = [x] + path
    cyc_set = set(cyc)

    side_verts, side_of_v1 = _side_split(pm2, cyc, v1, v2)
    colour: list[Optional[int]] = [None] * (x + 1)
    results = {}
    for side in (0, 1):
        vkeep = v1 if side_of_v1 == side else v2
        sub, mapping = _contract_side(pm2, cyc, cyc_set, side_verts[side], vkeep)
        xi = sub.n - 1
        cols = _poh_map(sub, mapping[vkeep], xi, depth + 1)
        results[side] = (cols, cols[xi], mapping)

    cols1, x1c, map1 = results[side_of_v1]
    cols2, x2c, map2 = results[1 - side_of_v1]
    perm = _colour_permutation(x2c, cols2[map2[v2]], x1c, cols1[map1[v1]])
    for old, new in map1.items():
        colour[old] = cols1[new]
    for old, new in map2.items():
        colour[old] = perm[cols2[new]]
    for u in cyc:
        colour[u] = x1c
    assert all(c is not None for c in colour)
    return colour  # type: ignore[return-value]


def _face_of(pm: _Pmap, d: int) -> list[int]:
    orbit = [d]
    cur = pm.face_next(d)
    while cur != d:
        orbit.append(cur)
        cur = pm.face_next(cur)
    return orbit


def _bfs_path(adj, a, b, forbidden):
    dist = {a: 0}
    frontier = [a]
    while frontier:
        nxt = []
        for v in sorted(frontier):
            for w in sorted(adj[v]):
                if w in forbidden or w in dist:
                    continue
                dist[w] = dist[v] + 1
                nxt.append(w)
        frontier = nxt
    if b not in dist:
        return None
    path = [b]
    while path[-1] != a:
        v = path[-1]
        path.append(min(w for w in adj[v] if w in dist and dist[w] == dist[v] - 1))
    return list(reversed(path))


def _side_split(pm: _Pmap, cyc: list[int], v1: int, v2: int):
    """Vertices strictly on each side of the cycle, and v1's side index.

    At each cycle vertex the rotation is cut by the two cycle darts; darts
    in one arc lead to side 0, the other to side 1 (consistent along the
    cycle by orientation).
    """
    k = len(cyc)
    side_darts: dict[int, list[list[int]]] = {}
    for i, c in enumerate(cyc):
        prev_c = cyc[(i - 1) % k]
        next_c = cyc[(i + 1) % k]
        ds = pm.rot[c]
        out_d = min(d for d in ds if pm.target[d] == next_c)
        in_d = min(d for d in ds if pm.target[d] == prev_c)
        j = ds.index(out_d)
        arc0, arc1 = [], []
        cur = (j + 1) % len(ds)
        bucket = arc0
        while ds[cur] != out_d:
            if ds[cur] == in_d:
                bucket = arc1
            else:
                bucket.append(ds[cur])
            cur = (cur + 1) % len(ds)
        side_darts[c] = [arc0, arc1]

    # flood the two sides from the boundary arcs
    sides: list[set[int]] = [set(), set()]
    adj = pm.simple_adj()
    for s in (0, 1):
        seeds = {
            pm.target[d]
            for c in cyc
            for d in side_darts[c][s]
            if pm.target[d] not in set(cyc)
        }
        comp = set(seeds)
        stack = list(seeds)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp and w not in set(cyc):
                    comp.add(w)
                    stack.append(w)
        sides[s] = comp
    assert not (sides[0] & sides[1]), "cycle must separate the sphere"
    assert sides[0] | sides[1] == set(range(pm.n)) - set(cyc)
    side_of_v1 = 0 if v1 in sides[0] else 1
    assert v2 in sides[1 - side_of_v1], "v1 and v2 must lie on opposite sides"
    return sides, side_of_v1


def _contract_side(pm: _Pmap, cyc: list[int], cyc_set: set[int], inside: set[int], vkeep: int):
    """Plane map of one side with the cycle contracted to the last vertex id.

    The global orientation sign of the input map is not tracked, so the
    cyclic order of the contracted vertex's darts is fixed by trying the
    four (arc direction, cycle direction) mirrors and keeping the first
    whose result is a genuine sphere map (Euler count 2); the wrong
    variants embed on a higher-genus surface and fail the check.
    """
    keep = sorted(inside)
    mapping = {v: i for i, v in enumerate(keep)}
    xi = len(keep)

    # per cycle vertex, the arc of darts facing this side
    k = len(cyc)
    arcs_by_vertex: list[list[int]] = []
    for i, c in enumerate(cyc):
        prev_c = cyc[(i - 1) % k]
        next_c = cyc[(i + 1) % k]
        ds = pm.rot[c]
        out_d = min(d for d in ds if pm.target[d] == next_c)
        in_d = min(d for d in ds if pm.target[d] == prev_c)
        j = ds.index(out_d)
        arcs: list[list[int]] = [[], []]
        cur = (j + 1) % len(ds)
        bucket = 0
        while ds[cur] != out_d:
            if ds[cur] == in_d:
                bucket = 1
            else:
                arcs[bucket].append(ds[cur])
            cur = (cur + 1) % len(ds)
        mine = arcs[0] if any(pm.target[d] in inside for d in arcs[0]) else arcs[1]
        other = arcs[1] if mine is arcs[0] else arcs[0]
        assert not any(pm.target[d] in inside for d in other)
        arcs_by_vertex.append([d for d in mine if pm.target[d] not in cyc_set])

    def build(arc_rev: bool, cyc_rev: bool):
        arcs = [list(reversed(a)) if arc_rev else list(a) for a in arcs_by_vertex]
        if cyc_rev:
            arcs = list(reversed(arcs))
        boundary = [d for a in arcs for d in a]
        dmap: dict[int, int] = {}
        origin: list[int] = []
        target: list[int] = []

        def new_dart(old: int, o: int, t: int) -> None:
            dmap[old] = len(origin)
            origin.append(o)
            target.append(t)

        for v in keep:
            for d in pm.rot[v]:
                td = pm.twin(d)
                if td in dmap or d in dmap:
                    continue
                tv = pm.target[d]
                if tv in inside:
                    new_dart(d, mapping[v], mapping[tv])
                    new_dart(td, mapping[tv], mapping[v])
                else:
                    assert tv in cyc_set
                    new_dart(d, mapping[v], xi)
                    new_dart(td, xi, mapping[v])
        rot = [[dmap[d] for d in pm.rot[v]] for v in keep]
        rot.append([dmap[d] for d in boundary])
        return _Pmap(xi + 1, rot, origin, target, check=False)

    sub = None
    for arc_rev, cyc_rev in ((False, False), (True, True), (True, False), (False, True)):
        cand = build(arc_rev, cyc_rev)
        m2 = sum(len(ds) for ds in cand.rot)
        if cand.n - m2 // 2 + len(cand.faces()) == 2:
            sub = cand
            break
    assert sub is not None, "no orientation variant yields a sphere map"
    sub.validate()
    assert sub.n < pm.n - 1, "contraction must shrink the instance"
    return sub, mapping


def _colour_permutation(x2c: int, v2c: int, x1c: int, v1c: int) -> dict[int, int]:
    """Permute side-2 colours so x2 matches x1 while v2 avoids v1's colour."""
    assert x2c != v2c and x1c != v1c, "marked vertices are properly coloured"
    perm = {x2c: x1c}
    targets = [c for c in (0, 1, 2) if c != x1c]
    other = next(c for c in (0, 1, 2) if c not in (x2c, v2c))
    if targets[0] == v1c:
        perm[v2c], perm[other] = targets[1], targets[0]
    else:
        perm[v2c], perm[other] = targets[0], targets[1]
    return perm
