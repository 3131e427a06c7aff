"""Desk-scale exhaustive ground truth.

Minimum colour counts under defect or clustering bounds, exact list
colourability, minor containment, connected tree-depth, circumference and
minimum balanced separators.  Every oracle refuses instances above its cap
rather than falling back to a heuristic: the outputs here are the expected
values of the acceptance tests and must never be approximate.

Symmetry breaking in the colour searches: the first processed vertex gets
colour 0 and new colours are introduced in increasing order, which changes
nothing about the verdicts.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Optional

from .colouring import Colouring, ListAssignment
from .errors import DefclustError, OracleCapExceeded
from .graphs import Graph, connected_components, degeneracy

DEFAULT_COLOUR_CAP = 24
DEFAULT_MINOR_G_CAP = 40
DEFAULT_MINOR_H_CAP = 8
DEFAULT_CTD_CAP = 16
DEFAULT_CIRCUMFERENCE_CAP = 60
DEFAULT_SEPARATOR_CAP = 24


def _search_order(G: Graph) -> list[int]:
    """DFS order from a max-degree vertex, preferring high-degree neighbours.

    Keeps conflicting vertices close together so the branch-and-prune
    searches fail fast.
    """
    order: list[int] = []
    seen = [False] * G.n
    verts = sorted(range(G.n), key=lambda v: (-G.degree(v), v))
    for s in verts:
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            order.append(v)
            for w in sorted(G.neighbours(v), key=lambda x: (G.degree(x), -x)):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return order


def _compositions(total: int, parts: int):
    """All tuples of `parts` non-negative ints summing to exactly `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _split_components(adj: list[frozenset[int]], rest: frozenset[int]) -> list[frozenset[int]]:
    out = []
    todo = set(rest)
    while todo:
        s = min(todo)
        comp = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v] & rest:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        out.append(frozenset(comp))
        todo -= comp
    return out


def exists_colouring_defect(G: Graph, k: int, d: int) -> bool:
    """Whether some k-colouring of G has defect <= d (exhaustive).

    Decomposition search: once the unassigned region splits into connected
    pieces, each piece only interacts with the assignment through the
    colours and remaining defect budgets of its boundary vertices, so the
    pieces are solved independently, enumerating budget allocations for
    boundary vertices shared between siblings.  Failures are cached by
    (piece, colour-normalized boundary state); feasibility is monotone in
    the budgets so only full-budget allocations are tried.
    """
    if k <= 0:
        return G.n == 0
    if d < 0:
        raise DefclustError("defect must be >= 0")
    adj = [frozenset(G.neighbours(v)) for v in range(G.n)]
    fail: set = set()

    def norm(entries: list[tuple[int, int, int]]):
        entries = sorted(entries)
        remap: dict[int, int] = {}
        out = []
        for v, c, r in entries:
            if c not in remap:
                remap[c] = len(remap)
            out.append((v, remap[c], r))
        return tuple(out)

    def solve(comp: frozenset[int], entries: tuple[tuple[int, int, int], ...]) -> bool:
        key = (comp, entries)
        if key in fail:
            return False
        v = min(
            comp,
            key=lambda x: (
                -sum(1 for (b, _, _) in entries if x in adj[b]),
                -len(adj[x] & comp),
                x,
            ),
        )
        t = len({c for (_, c, _) in entries})
        ok = False
        for c in range(min(t + 1, k)):
            same = [i for i, (b, cb, _) in enumerate(entries) if cb == c and v in adj[b]]
            if len(same) > d or any(entries[i][2] < 1 for i in same):
                continue
            new_entries = [
                (b, cb, r - 1) if i in set(same) else (b, cb, r)
                for i, (b, cb, r) in enumerate(entries)
            ]
            new_entries.append((v, c, d - len(same)))
            rest = comp - {v}
            if not rest:
                ok = True
                break
            subs = _split_components(adj, rest)
            live = [(b, cb, r) for (b, cb, r) in new_entries if adj[b] & rest]
            if len(subs) == 1:
                if solve(rest, norm(live)):
                    ok = True
                    break
                continue
            touch = [[e for e in live if adj[e[0]] & sub] for sub in subs]
            shared = sorted(
                {b for (b, _, _) in live}
                & {
                    b
                    for (b, _, _) in live
                    if sum(1 for te in touch if any(e[0] == b for e in te)) > 1
                }
            )
            shared_set = set(shared)
            budget = {b: r for (b, _, r) in live}
            found = False
            for alloc in _alloc_product(shared, budget, subs, adj):
                good = True
                for j, sub in enumerate(subs):
                    sub_entries = [
                        (b, cb, alloc[(b, j)] if b in shared_set else r)
                        for (b, cb, r) in touch[j]
                    ]
                    if not solve(sub, norm(sub_entries)):
                        good = False
                        break
                if good:
                    found = True
                    break
            if found:
                ok = True
                break
        if not ok:
            fail.add(key)
        return ok

    def _alloc_product(shared, budget, subs, adj_):
        """Joint allocations: for each shared vertex, a composition of its
        budget over the sub-pieces it touches."""
        per_vertex = []
        for b in shared:
            touching = [j for j, sub in enumerate(subs) if adj_[b] & sub]
            per_vertex.append((b, touching))
        def rec(i, acc):
            if i == len(per_vertex):
                yield dict(acc)
                return
            b, touching = per_vertex[i]
            for comp_alloc in _compositions(budget[b], len(touching)):
                more = [((b, j), a) for j, a in zip(touching, comp_alloc)]
                yield from rec(i + 1, acc + more)
        yield from rec(0, [])

    for piece in _split_components(adj, frozenset(range(G.n))):
        if not solve(piece, ()):
            return False
    return True


def min_colours_defect(G: Graph, d: int, cap: int = DEFAULT_COLOUR_CAP) -> int:
    """Minimum k such that some k-colouring of G has defect <= d."""
    if d < 0:
        raise DefclustError("defect must be >= 0")
    if G.n > cap:
        raise OracleCapExceeded("min_colours_defect", G.n, cap)
    if G.n == 0:
        return 0
    for k in range(1, G.n + 1):
        if exists_colouring_defect(G, k, d):
            return k
    raise AssertionError("n colours always suffice")


def exists_colouring_clustering(G: Graph, k: int, c: int) -> bool:
    """Whether some k-colouring of G has clustering <= c (exhaustive).

    Same decomposition scheme as the defect search, but the boundary state
    tracks monochromatic groups (members facing the region, colour, size).
    A split is only taken when each colour has at most one group shared
    between siblings; the shared group's remaining capacity is then
    allocated across siblings (presented as an inflated size), which keeps
    the search exact.  Otherwise the region is searched un-split.
    """
    if k <= 0:
        return G.n == 0
    if c < 1:
        raise DefclustError("clustering must be >= 1")
    adj = [frozenset(G.neighbours(v)) for v in range(G.n)]
    fail: set = set()

    def norm(groups):
        groups = sorted(groups)
        remap: dict[int, int] = {}
        out = []
        for members, col, size in groups:
            if col not in remap:
                remap[col] = len(remap)
            out.append((members, remap[col], size))
        return tuple(sorted(out))

    def solve(comp: frozenset[int], groups) -> bool:
        key = (comp, groups)
        if key in fail:
            return False
        members_all = [m for (ms, _, _) in groups for m in ms]
        v = min(
            comp,
            key=lambda x: (
                -sum(1 for m in members_all if x in adj[m]),
                -len(adj[x] & comp),
                x,
            ),
        )
        t = len({col for (_, col, _) in groups})
        ok = False
        for col in range(min(t + 1, k)):
            merged = [g for g in groups if g[1] == col and any(v in adj[m] for m in g[0])]
            size = 1 + sum(g[2] for g in merged)
            if size > c:
                continue
            keep = [g for g in groups if g not in merged]
            new_members = tuple(sorted({v} | {m for g in merged for m in g[0]}))
            new_groups = keep + [(new_members, col, size)]
            rest = comp - {v}
            if not rest:
                ok = True
                break
            live = []
            for ms, gcol, gsize in new_groups:
                ms2 = tuple(m for m in ms if adj[m] & rest)
                if ms2:
                    live.append((ms2, gcol, gsize))
            subs = _split_components(adj, rest)
            if len(subs) == 1:
                if solve(rest, norm(live)):
                    ok = True
                    break
                continue
            touch = [
                [g for g in live if any(adj[m] & sub for m in g[0])] for sub in subs
            ]
            counts: dict = {}
            for g in live:
                hits = sum(1 for te in touch if g in te)
                if hits > 1:
                    counts[g] = [j for j, te in enumerate(touch) if g in te]
            per_colour: dict[int, int] = {}
            for g in counts:
                per_colour[g[1]] = per_colour.get(g[1], 0) + 1
            if any(x > 1 for x in per_colour.values()):
                # two shared groups of one colour could merge through a
                # sibling; capacity allocation is no longer additive, so
                # search the region un-split (still exact, just slower)
                if solve(rest, norm(live)):
                    ok = True
                    break
                continue
            found = False
            for alloc in _group_allocs(list(counts.items()), c):
                good = True
                for j, sub in enumerate(subs):
                    sub_groups = []
                    for g in touch[j]:
                        ms2 = tuple(m for m in g[0] if adj[m] & sub)
                        if g in counts:
                            sub_groups.append((ms2, g[1], c - alloc[(g, j)]))
                        else:
                            sub_groups.append((ms2, g[1], g[2]))
                    if not solve(sub, norm(sub_groups)):
                        good = False
                        break
                if good:
                    found = True
                    break
            if found:
                ok = True
                break
        if not ok:
            fail.add(key)
        return ok

    def _group_allocs(shared_items, cbound):
        def rec(i, acc):
            if i == len(shared_items):
                yield dict(acc)
                return
            g, touching = shared_items[i]
            cap_left = cbound - g[2]
            for comp_alloc in _compositions(cap_left, len(touching)):
                more = [((g, j), a) for j, a in zip(touching, comp_alloc)]
                yield from rec(i + 1, acc + more)
        yield from rec(0, [])

    for piece in _split_components(adj, frozenset(range(G.n))):
        if not solve(piece, ()):
            return False
    return True


def min_colours_clustering(G: Graph, c: int, cap: int = DEFAULT_COLOUR_CAP) -> int:
    """Minimum k such that some k-colouring of G has clustering <= c."""
    if G.n > cap:
        raise OracleCapExceeded("min_colours_clustering", G.n, cap)
    if G.n == 0:
        return 0
    for k in range(1, G.n + 1):
        if exists_colouring_clustering(G, k, c):
            return k
    raise AssertionError("n colours always suffice")


def list_colourable_with_defect(
    G: Graph, L: ListAssignment, d: int, cap: int = DEFAULT_COLOUR_CAP
) -> tuple[bool, Optional[Colouring]]:
    """Exact verdict for L-colourability with defect d, with witness when true."""
    if G.n > cap:
        raise OracleCapExceeded("list_colourable_with_defect", G.n, cap)
    if len(L) != G.n:
        raise DefclustError("list assignment domain mismatch")
    order = sorted(range(G.n), key=lambda v: (len(L[v]), -G.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[w for w in G.neighbours(v) if pos[w] < pos[v]] for v in order]

    colour: list[Optional[int]] = [None] * G.n
    mono = [0] * G.n

    def backtrack(i: int) -> bool:
        if i == G.n:
            return True
        v = order[i]
        for c in sorted(L[v]):
            same = [u for u in earlier[i] if colour[u] == c]
            if len(same) > d or any(mono[u] + 1 > d for u in same):
                continue
            colour[v] = c
            for u in same:
                mono[u] += 1
            mono[v] = len(same)
            if backtrack(i + 1):
                return True
            colour[v] = None
            for u in same:
                mono[u] -= 1
        return False

    if backtrack(0):
        return True, Colouring(colour)
    return False, None


# -- minors -----------------------------------------------------------------


def _treewidth_upper(G: Graph) -> int:
    """Greedy min-fill elimination width (an upper bound on treewidth)."""
    adj = {v: set(G.neighbours(v)) for v in range(G.n)}
    width = 0
    alive = set(range(G.n))
    while alive:
        best, best_key = None, None
        for v in alive:
            nb = adj[v] & alive
            fill = sum(1 for a, b in combinations(sorted(nb), 2) if b not in adj[a])
            key = (fill, len(nb), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        nb = adj[best] & alive
        width = max(width, len(nb))
        for a, b in combinations(sorted(nb), 2):
            adj[a].add(b)
            adj[b].add(a)
        alive.remove(best)
    return width


def has_minor(
    G: Graph,
    H: Graph,
    g_cap: int = DEFAULT_MINOR_G_CAP,
    h_cap: int = DEFAULT_MINOR_H_CAP,
) -> bool:
    """Exact minor containment by search over branch-set models.

    H-vertices are assigned disjoint connected branch sets in degree order;
    candidate sets are enumerated canonically (by least anchor vertex) with
    attachment- and boundary-degree pruning.  A treewidth comparison
    (greedy elimination upper bound on G vs degeneracy lower bound on H)
    settles many negative instances without search.
    """
    if H.n > h_cap:
        raise OracleCapExceeded("has_minor: |V(H)|", H.n, h_cap)
    if G.n > g_cap:
        raise OracleCapExceeded("has_minor: |V(G)|", G.n, g_cap)
    if H.n == 0:
        return True
    if H.n > G.n or H.m > G.m:
        return False
    if _treewidth_upper(G) < degeneracy(H):
        return False

    horder = sorted(range(H.n), key=lambda v: (-H.degree(v), v))
    hpos = {v: i for i, v in enumerate(horder)}
    h_earlier = [[hpos[w] for w in H.neighbours(v) if hpos[w] < hpos[v]] for v in horder]
    h_later_deg = [sum(1 for w in H.neighbours(v) if hpos[w] > hpos[v]) for v in horder]

    branch: list[frozenset[int]] = []
    free = set(range(G.n))

    def candidate_sets(req: list[frozenset[int]], max_size: int):
        """Connected subsets of `free`, adjacent to every set in req.

        Canonical enumeration: each set is produced once, keyed by its least
        vertex in the anchor pool (neighbours of req[0], or all of free).
        Sets are yielded as soon as all attachments are met but growth
        continues, since later branch sets may need a larger neighbourhood.
        """
        req_nbrs = [frozenset(w for v in r for w in G.neighbours(v)) & frozenset(free)
                    for r in req]
        if any(not rn for rn in req_nbrs):
            return
        pool = sorted(req_nbrs[0]) if req else sorted(free)

        def grow(curset: frozenset[int], ext: tuple[int, ...], banned: frozenset[int]):
            unmet = [rn for rn in req_nbrs if not (curset & rn)]
            if not unmet:
                yield curset
            if len(curset) >= max_size:
                return
            avail = free - banned - curset
            if any(not (rn & avail) for rn in unmet):
                return
            for i, v in enumerate(ext):
                fresh = tuple(
                    w
                    for w in G.neighbours(v)
                    if w in free and w not in curset and w not in banned and w not in ext
                )
                yield from grow(
                    curset | {v}, ext[i + 1 :] + fresh, banned | frozenset(ext[:i])
                )

        for idx, a in enumerate(pool):
            banned = frozenset(pool[:idx])
            ext = tuple(w for w in G.neighbours(a) if w in free and w not in banned)
            yield from grow(frozenset([a]), ext, banned)

    def place(i: int) -> bool:
        if i == H.n:
            return True
        req = [branch[j] for j in h_earlier[i]]
        budget = len(free) - (H.n - i - 1)
        if budget < 1:
            return False
        for B in candidate_sets(req, budget):
            boundary = {w for v in B for w in G.neighbours(v)} - B
            if len(boundary & (free - B)) < h_later_deg[i]:
                continue
            branch.append(B)
            free.difference_update(B)
            if place(i + 1):
                return True
            free.update(B)
            branch.pop()
        return False

    return place(0)


# -- connected tree-depth -----------------------------------------------------


def connected_tree_depth(H: Graph, cap: int = DEFAULT_CTD_CAP) -> int:
    """Minimum depth of a rooted tree whose closure contains H as a subgraph.

    For connected H this is the usual tree-depth recursion; a disconnected
    H needs one extra level exactly when two components tie for the
    maximum.
    """
    if H.n > cap:
        raise OracleCapExceeded("connected_tree_depth", H.n, cap)
    if H.n == 0:
        return 0
    full = frozenset(range(H.n))
    neigh = [frozenset(H.neighbours(v)) for v in range(H.n)]

    @lru_cache(maxsize=None)
    def components_of(sub: frozenset) -> tuple[frozenset, ...]:
        rest = set(sub)
        out = []
        while rest:
            s = min(rest)
            comp = {s}
            stack = [s]
            while stack:
                v = stack.pop()
                for w in neigh[v] & sub:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            out.append(frozenset(comp))
            rest -= comp
        return tuple(out)

    @lru_cache(maxsize=None)
    def td(sub: frozenset) -> int:
        if len(sub) == 1:
            return 1
        comps = components_of(sub)
        if len(comps) > 1:
            return max(td(c) for c in comps)
        return 1 + min(td(sub - {v}) for v in sorted(sub))

    comps = components_of(full)
    if len(comps) == 1:
        return td(full)
    vals = sorted((td(c) for c in comps), reverse=True)
    return vals[0] + 1 if vals[0] == vals[1] else vals[0]


# -- circumference -------------------------------------------------------------


def circumference(G: Graph, cap: int = DEFAULT_CIRCUMFERENCE_CAP) -> int:
    """Longest cycle length, by exhaustive DFS; 2 for forests by convention."""
    cyc = longest_cycle(G, cap=cap)
    return len(cyc) if cyc is not None else 2


def longest_cycle(G: Graph, cap: int = DEFAULT_CIRCUMFERENCE_CAP) -> Optional[list[int]]:
    """A longest cycle (vertex list) or None for forests.

    Every cycle is searched from its least vertex using only larger
    vertices, so each is explored once per orientation.  The first longest
    cycle in this canonical order is returned, which keeps runs
    reproducible.
    """
    if G.n > cap:
        raise OracleCapExceeded("longest_cycle", G.n, cap)
    best: Optional[list[int]] = None
    onpath = [False] * G.n
    path: list[int] = []

    def dfs(s: int, v: int) -> None:
        nonlocal best
        for w in G.neighbours(v):
            if w == s and len(path) >= 3:
                if best is None or len(path) > len(best):
                    best = list(path)
            if w > s and not onpath[w]:
                onpath[w] = True
                path.append(w)
                dfs(s, w)
                path.pop()
                onpath[w] = False

    for s in range(G.n):
        onpath[s] = True
        path.append(s)
        dfs(s, s)
        path.pop()
        onpath[s] = False
        if best is not None and len(best) == G.n:
            break
    return best


def longest_path_order(G: Graph, cap: int = DEFAULT_CIRCUMFERENCE_CAP) -> int:
    """Number of vertices on a longest path, by exhaustive DFS."""
    if G.n > cap:
        raise OracleCapExceeded("longest_path_order", G.n, cap)
    best = 0
    onpath = [False] * G.n

    def dfs(v: int, length: int) -> None:
        nonlocal best
        if length > best:
            best = length
        for w in G.neighbours(v):
            if not onpath[w]:
                onpath[w] = True
                dfs(w, length + 1)
                onpath[w] = False

    for s in range(G.n):
        onpath[s] = True
        dfs(s, 1)
        onpath[s] = False
        if best == G.n:
            break
    return best


# -- balanced separators --------------------------------------------------------


def is_balanced_separator(G: Graph, S: frozenset[int]) -> bool:
    rest = [v for v in range(G.n) if v not in S]
    if not rest:
        return True
    sub, _ = G.induced_subgraph(rest)
    return all(len(c) * 2 <= G.n for c in connected_components(sub))


def min_balanced_separator(G: Graph, cap: int = DEFAULT_SEPARATOR_CAP) -> frozenset[int]:
    """Minimum-cardinality balanced separator by subset search ordered by size."""
    if G.n > cap:
        raise OracleCapExceeded("min_balanced_separator", G.n, cap)
    for size in range(G.n + 1):
        for S in combinations(range(G.n), size):
            fs = frozenset(S)
            if is_balanced_separator(G, fs):
                return fs
    raise AssertionError("V(G) is always a balanced separator")
