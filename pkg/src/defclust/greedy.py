"""Generic greedy frameworks and closed-form parameter calculators.

The two colouring frameworks (light edges, islands) execute their
correctness proofs as explicit worklists: peel a reducible configuration,
colour the remainder, then recolour on re-insertion.  Hypotheses are never
trusted: a missing configuration raises :class:`HypothesisViolation` with
the offending subgraph, and every finished colouring is audited.

Parameter calculators use exact rational arithmetic; thresholds such as
1/k + 1/d <= 2/m are exact inequalities, never float comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, NamedTuple, Optional, Sequence

from .colouring import (
    Certificate,
    Colouring,
    ColourAllocator,
    ListAssignment,
    audit,
    product_colouring,
    respects_lists,
)
from .errors import ContractViolation, DefclustError, HypothesisViolation, OracleCapExceeded
from .graphs import Graph, connected_components


# -- light-edge greedy ---------------------------------------------------------


def light_edge_colour(G: Graph, L: ListAssignment, k: int, ell: int) -> Colouring:
    """List colouring with defect <= ell-k via the light-edge reduction.

    Requires |L(v)| >= k+1 and the structural hypothesis that every
    subgraph has a vertex of degree <= k or an ell-light edge (both
    endpoints of degree <= ell).  When the hypothesis fails, the current
    subgraph is raised as a witness; its degree profile genuinely violates
    the hypothesis.
    """
    if not (ell >= k >= 1):
        raise DefclustError("need ell >= k >= 1")
    if len(L) != G.n:
        raise DefclustError("list assignment domain mismatch")
    if not L.is_k_list_assignment(k + 1):
        raise DefclustError(f"need (k+1)-lists, k+1={k + 1}")

    alive = set(range(G.n))
    deg = {v: G.degree(v) for v in alive}
    steps: list[tuple] = []
    while alive:
        v = min((v for v in alive if deg[v] <= k), default=None)
        if v is not None:
            steps.append(("vertex", v))
            alive.remove(v)
            for w in G.neighbours(v):
                if w in alive:
                    deg[w] -= 1
            continue
        edge = None
        for u in sorted(alive):
            if deg[u] > ell:
                continue
            for w in G.neighbours(u):
                if w > u and w in alive and deg[w] <= ell:
                    edge = (u, w)
                    break
            if edge:
                break
        if edge is None:
            sub = tuple(sorted(alive))
            raise HypothesisViolation(
                f"no vertex of degree <= {k} and no {ell}-light edge in the remaining subgraph",
                witness=sub,
            )
        steps.append(("edge", *edge))
        # edge removal: adjust degrees only
        u, w = edge
        deg[u] -= 1
        deg[w] -= 1

    colour: list[Optional[int]] = [None] * G.n
    removed_edges: set[tuple[int, int]] = {
        (s[1], s[2]) for s in steps if s[0] == "edge"
    }
    present = [False] * G.n

    def live_neighbours(x: int):
        return [
            y
            for y in G.neighbours(x)
            if present[y] and (min(x, y), max(x, y)) not in removed_edges
        ]

    for step in reversed(steps):
        if step[0] == "vertex":
            v = step[1]
            present[v] = True
            taken = {colour[y] for y in live_neighbours(v)}
            free = sorted(L[v] - taken)
            assert free, "degree <= k vertex must have a free colour in a (k+1)-list"
            colour[v] = free[0]
        else:
            _, u, w = step
            removed_edges.discard((u, w))
            # proof step: if u,w now clash and someone exceeds the defect,
            # it has at most k-1 differently-coloured neighbours, so a
            # totally-free colour exists for it
            for x in (u, w):
                same = [y for y in live_neighbours(x) if colour[y] == colour[x]]
                if len(same) > ell - k:
                    taken = {colour[y] for y in live_neighbours(x)}
                    free = sorted(L[x] - taken)
                    assert free, "light-edge recolouring must find a free colour"
                    colour[x] = free[0]

    chi = Colouring(colour)
    cert = audit(G, chi)
    assert cert.defect <= ell - k and respects_lists(chi, L)
    return chi


# -- island peeling --------------------------------------------------------------


class IslandRun(NamedTuple):
    colouring: Colouring
    islands: tuple[tuple[int, ...], ...]


def island_colour(
    G: Graph,
    L: ListAssignment,
    k: int,
    island_finder: Callable[[Graph, list[int]], Sequence[int]],
) -> IslandRun:
    """List colouring by peeling k-islands.

    ``island_finder(subgraph, old_ids)`` must return a non-empty k-island
    of the subgraph in the subgraph's vertex ids; every member may have at
    most k neighbours outside the island.  Clustering is bounded by the
    largest island, which the caller's finder is responsible for.
    """
    if len(L) != G.n:
        raise DefclustError("list assignment domain mismatch")
    if not L.is_k_list_assignment(k + 1):
        raise DefclustError(f"need (k+1)-lists, k+1={k + 1}")

    alive = sorted(range(G.n))
    islands: list[tuple[int, ...]] = []
    while alive:
        sub, old = G.induced_subgraph(alive)
        picked = island_finder(sub, old)
        island = sorted(old[i] for i in picked)
        if not island:
            raise HypothesisViolation("island finder returned an empty set", witness=())
        alive_set = set(alive)
        isl_set = set(island)
        for v in island:
            outside = sum(1 for w in G.neighbours(v) if w in alive_set and w not in isl_set)
            if outside > k:
                raise HypothesisViolation(
                    f"island finder returned a non-island: vertex {v} has {outside} outside neighbours > {k}",
                    witness=v,
                )
        islands.append(tuple(island))
        alive = [v for v in alive if v not in isl_set]

    colour: list[Optional[int]] = [None] * G.n
    coloured: set[int] = set()
    for island in reversed(islands):
        isl_set = set(island)
        for v in island:
            taken = {
                colour[w]
                for w in G.neighbours(v)
                if w in coloured and w not in isl_set
            }
            free = sorted(L[v] - taken)
            assert free, "only k outside neighbours but k+1 list colours"
            colour[v] = free[0]
        coloured |= isl_set

    chi = Colouring(colour)
    assert respects_lists(chi, L)
    return IslandRun(chi, tuple(islands))


def singleton_island_finder(k: int) -> Callable[[Graph, list[int]], Sequence[int]]:
    """Island finder for k-degenerate graphs: a minimum-degree vertex."""

    def find(sub: Graph, old: list[int]) -> Sequence[int]:
        v = min(range(sub.n), key=lambda x: (sub.degree(x), x))
        if sub.degree(v) > k:
            raise HypothesisViolation(
                f"subgraph has minimum degree {sub.degree(v)} > {k}", witness=old[v]
            )
        return [v]

    return find


# -- Lovász-style local search ----------------------------------------------------


class LovaszRun(NamedTuple):
    colouring: Colouring
    moves: int
    bichromatic_trace: tuple[int, ...]


def lovasz_defective(G: Graph, d: int) -> LovaszRun:
    """k-colouring with defect d for k = floor(Delta/(d+1)) + 1.

    Local search from the all-zero colouring: while some vertex has more
    than d same-coloured neighbours, move it to a colour class where it has
    at most d (one always exists).  The bichromatic edge count strictly
    increases, so at most |E| moves happen.
    """
    if d < 0:
        raise DefclustError("defect must be >= 0")
    delta = G.max_degree()
    k = delta // (d + 1) + 1
    colour = [0] * G.n

    def bichromatic() -> int:
        return sum(1 for u, v in G.edges() if colour[u] != colour[v])

    trace = [bichromatic()]
    moves = 0
    dirty = True
    while dirty:
        dirty = False
        for v in range(G.n):
            counts = [0] * k
            for w in G.neighbours(v):
                counts[colour[w]] += 1
            if counts[colour[v]] <= d:
                continue
            target = min(c for c in range(k) if counts[c] <= d)
            colour[v] = target
            moves += 1
            trace.append(bichromatic())
            dirty = True
    assert all(b2 > b1 for b1, b2 in zip(trace, trace[1:]))
    assert moves <= G.m
    chi = Colouring(colour)
    assert audit(G, chi).defect <= d
    return LovaszRun(chi, moves, tuple(trace))


def lovasz_colour_count(delta: int, d: int) -> int:
    return delta // (d + 1) + 1


# -- peeling engines ---------------------------------------------------------------


def tree_subgraph_peel(G: Graph, n_tree: int, r: int) -> Colouring:
    """r-colouring with defect n_tree - 2 for graphs with no T subgraph,
    where T is a tree on n_tree vertices with radius r (caller-asserted).

    Layers V_1..V_{r-1} collect vertices with at most n_tree-2 residual
    neighbours; V_r takes the rest.  The audit exposes a false hypothesis.
    """
    if n_tree < 2 or r < 1:
        raise DefclustError("need tree order >= 2 and radius >= 1")
    remaining = set(range(G.n))
    colour = [r - 1] * G.n
    for i in range(r - 1):
        layer = {
            v for v in remaining
            if sum(1 for w in G.neighbours(v) if w in remaining) <= n_tree - 2
        }
        for v in layer:
            colour[v] = i
        remaining -= layer
    # layers 1..r-1 have defect <= n-2 by construction; only the last can fail
    chi = Colouring(colour)
    cert = audit(G, chi)
    if cert.defect > n_tree - 2:
        bad = max(
            (v for v in range(G.n) if colour[v] == r - 1),
            key=lambda v: sum(1 for w in G.neighbours(v) if colour[w] == r - 1),
        )
        raise HypothesisViolation(
            f"T-subgraph hypothesis violated: vertex {bad} has high residual degree",
            witness=bad,
        )
    return chi


def thickness_peel(G: Graph, L: ListAssignment, k: int, g: int) -> Colouring:
    """(6k+1)-list colouring with clustering max(g,1) for g-thickness <= k.

    Two-phase peeling: below 6kg vertices a colour-counting step keeps
    classes small; above it a vertex of degree <= 6k must exist (else the
    thickness hypothesis is violated) and gets a properly-free colour.
    """
    if k < 1 or g < 0:
        raise DefclustError("need k >= 1 and g >= 0")
    if not L.is_k_list_assignment(6 * k + 1):
        raise DefclustError("need (6k+1)-lists")
    alive = set(range(G.n))
    deg = {v: G.degree(v) for v in alive}
    steps: list[tuple] = []
    while alive:
        if len(alive) <= 6 * k * g:
            v = min(alive)
            steps.append(("count", v))
        else:
            v = min((x for x in alive if deg[x] <= 6 * k), default=None)
            if v is None:
                raise HypothesisViolation(
                    "thickness hypothesis violated: no vertex of degree <= 6k "
                    f"in a subgraph on {len(alive)} > 6kg vertices",
                    witness=tuple(sorted(alive)),
                )
            steps.append(("greedy", v))
        alive.remove(v)
        for w in G.neighbours(v):
            if w in alive:
                deg[w] -= 1

    colour: list[Optional[int]] = [None] * G.n
    coloured: set[int] = set()
    usage: dict[int, int] = {}
    for kind, v in reversed(steps):
        if kind == "greedy":
            taken = {colour[w] for w in G.neighbours(v) if w in coloured}
            free = sorted(L[v] - taken)
            assert free, "degree <= 6k but 6k+1 list colours"
            colour[v] = free[0]
        else:
            # some list colour is used by at most g-1 coloured vertices
            best = min(sorted(L[v]), key=lambda c: (usage.get(c, 0), c))
            assert usage.get(best, 0) <= max(g - 1, 0)
            colour[v] = best
        usage[colour[v]] = usage.get(colour[v], 0) + 1
        coloured.add(v)

    chi = Colouring(colour)
    cert = audit(G, chi)
    assert cert.clustering <= max(g, 1) and respects_lists(chi, L)
    return chi


# -- closed-form parameter calculators ------------------------------------------


def oow_light_bound(s: int, t: int, delta: Fraction, nabla: Fraction) -> int:
    """The light-edge bound ell(s, t, delta, nabla) for graphs with no
    K*_{s,t} subgraph; such graphs are s-choosable with defect ell - s + 1."""
    if s < 1 or t < 1:
        raise DefclustError("need s, t >= 1")
    delta = Fraction(delta)
    nabla = Fraction(nabla)
    if delta < 0 or nabla < 0:
        raise DefclustError("densities must be >= 0")
    if s == 1:
        return t - 1
    if s == 2:
        return math.floor(Fraction(1, 2) * (delta - 2) * nabla * t + delta)
    return math.floor(
        (delta - s) * (math.comb(math.floor(nabla), s - 1) * (t - 1) + Fraction(1, 2) * nabla)
        + delta
    )


def mad_defect_params(m: Fraction) -> tuple[int, int]:
    """(k, d) with k = floor(m/2)+1 and d = ceil(m^2/(4k-2m) + m/2).

    Guarantees 1/k + 1/d <= 2/m exactly, so graphs of maximum average
    degree <= m are k-choosable with defect d via the light-edge greedy.
    """
    m = Fraction(m)
    if m <= 0:
        raise DefclustError("need m > 0")
    k = math.floor(m / 2) + 1
    d = math.ceil(m * m / (4 * k - 2 * m) + m / 2)
    assert Fraction(1, k) + Fraction(1, d) <= Fraction(2) / m
    return k, d


def thickness_light_bound(g: int, k: int) -> int:
    """ell = 2kg + 8k^2 + 2k + 1: graphs of g-thickness k and min degree
    >= 2k+1 have an (ell-1)-light edge."""
    if g < 0 or k < 1:
        raise DefclustError("need g >= 0, k >= 1")
    return 2 * k * g + 8 * k * k + 2 * k + 1


def light_edge_conditions(g: int, k: int, delta: int, ell: int) -> bool:
    """Exact check of the three feasibility conditions of the generic
    light-edge lemma for g-thickness-k graphs of min degree delta."""
    if not (6 * k >= delta >= 2 * k + 1):
        return False
    if not ((delta - 2 * k) * ell > 4 * k * delta):
        return False
    lhs = (
        (delta - 2 * k) * ell * ell
        - ((4 * k - 1) * delta + 2 * k * (g - 1)) * ell
        - 4 * k * (g - 1) * delta
    )
    return lhs > 0


def defective_choice_number(excluded_bipartite: Sequence[tuple[int, int]]) -> int:
    """Defective choice number of a subgraph-closed class with bounded
    densities, given the pairs (s, t) with K_{s,t} not in the class.

    The answer is the least s appearing among the excluded pairs; the
    K_{s,t} list gadget certifies that fewer colours cannot work.
    """
    pairs = [(s, t) for s, t in excluded_bipartite]
    if not pairs:
        raise DefclustError("need at least one excluded K_{s,t}")
    if any(s < 1 or t < 1 for s, t in pairs):
        raise DefclustError("pairs must be >= 1")
    return min(s for s, _ in pairs)


def nabla_exact(G: Graph, cap: int = 10) -> Fraction:
    """Topological-minor density: max average degree of an H whose
    1-subdivision is a subgraph of G.  Exhaustive; tiny instances only."""
    if G.n > cap:
        raise OracleCapExceeded("nabla_exact", G.n, cap)
    best = Fraction(0)
    verts = list(range(G.n))
    for r in range(1, G.n + 1):
        for branch in combinations(verts, r):
            bset = set(branch)
            mids = [v for v in verts if v not in bset]
            # each H-edge needs its own midpoint adjacent to both endpoints
            pairs = [
                (a, b)
                for a, b in combinations(branch, 2)
            ]
            # max matching between pairs and usable midpoints
            adj = {
                p: [m for m in mids if G.has_edge(p[0], m) and G.has_edge(p[1], m)]
                for p in pairs
            }
            match: dict[int, tuple[int, int]] = {}

            def try_assign(p, seen):
                for m in adj[p]:
                    if m in seen:
                        continue
                    seen.add(m)
                    if m not in match or try_assign(match[m], seen):
                        match[m] = p
                        return True
                return False

            edges = 0
            for p in sorted(adj, key=lambda q: len(adj[q])):
                if try_assign(p, set()):
                    edges += 1
            if edges:
                best = max(best, Fraction(2 * edges, r))
    return best


# -- the epsilon combinator ---------------------------------------------------------


@dataclass(frozen=True)
class EngineContract:
    """Declared behaviour of a base engine: on any graph of max degree D it
    uses at most D/x + y colours with clustering at most alpha*D."""

    x: Fraction
    y: Fraction
    alpha: Fraction


class EpsilonRun(NamedTuple):
    colouring: Colouring
    split_defect: Optional[int]
    clustering_bound: Fraction


def epsilon_compose(
    base: Callable[[Graph], Colouring],
    contract: EngineContract,
    eps: Fraction,
    G: Graph,
) -> EpsilonRun:
    """Trade an epsilon more colours for clustering independent of Delta.

    With d = ceil((2/eps)(xy-1)) - 1 and c = max(alpha*d, 2*alpha*d/eps):
    small graphs pass straight through to the base engine; otherwise a
    defect-d split is refined by the base engine on each class.  The base
    engine's contract is audited on every invocation and a violation is a
    hard error.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DefclustError("need eps > 0")
    x, y, alpha = contract.x, contract.y, contract.alpha
    d = max(math.ceil(Fraction(2, 1) / eps * (x * y - 1)) - 1, 0)
    c = max(alpha * d, 2 * alpha * d / eps)
    delta = G.max_degree()

    def run_checked(H: Graph, budget_delta: int) -> Colouring:
        chi = base(H)
        cert = audit(H, chi)
        if cert.k > budget_delta / x + y or cert.clustering > alpha * budget_delta:
            raise ContractViolation(
                f"base engine used {cert.k} colours / clustering {cert.clustering} "
                f"on a graph within max degree {budget_delta}; declared "
                f"(x={x}, y={y}, alpha={alpha})"
            )
        return chi

    if alpha * delta <= c or d >= delta:
        chi = run_checked(G, delta)
        return EpsilonRun(chi, None, max(alpha * delta, c))

    split = lovasz_defective(G, d).colouring
    per_class: list[Colouring] = []
    for cls in split.classes():
        sub, _ = G.induced_subgraph(cls)
        per_class.append(run_checked(sub, d))
    chi = product_colouring(split, per_class)
    cert = audit(G, chi)
    assert cert.k <= (1 + eps) * Fraction(delta) / x + y
    assert cert.clustering <= c
    return EpsilonRun(chi, d, c)
