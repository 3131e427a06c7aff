"""The fragmentation-to-island pipeline and the island-loop colourers.

Separator oracles declare constants (c, beta) and every returned separator
is checked against the declaration per call; a violation is a hard error
carrying the offending subgraph, never a warning.  All closed-form bounds
involve 2**beta, so the bound arithmetic runs in sympy's exact algebraic
numbers; a size comparison is never settled by a float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import sympy as sp

from .colouring import Colouring, ListAssignment, audit, respects_lists
from .errors import (
    DefclustError,
    HypothesisViolation,
    OracleCapExceeded,
    OracleContractViolation,
)
from .graphs import Graph, bfs_layering, connected_components
from .oracle import min_balanced_separator


def _exact_ceil(expr) -> int:
    """Exact ceiling of a sympy expression (algebraic, never float)."""
    val = sp.ceiling(sp.nsimplify(expr))
    out = int(val)
    assert val == out
    return out


@dataclass
class SeparatorOracle:
    """Balanced-separator provider with declared guarantee |S| <= c * n^(1-beta).

    ``find`` maps a (sub)graph to a vertex set; ``c`` and ``beta`` are sympy
    expressions (beta rational in (0,1)).  ``describe`` names the oracle in
    error messages.
    """

    c: sp.Expr
    beta: sp.Rational
    find: Callable[[Graph], frozenset[int]]
    describe: str = "oracle"

    def __post_init__(self):
        self.c = sp.nsimplify(self.c)
        self.beta = sp.Rational(self.beta)
        if not (0 < self.beta < 1):
            raise DefclustError("beta must lie in (0,1)")

    def size_bound(self, n: int) -> sp.Expr:
        return self.c * sp.Integer(n) ** (1 - self.beta)

    def checked_find(self, H: Graph) -> frozenset[int]:
        S = frozenset(self.find(H))
        if not all(0 <= v < H.n for v in S):
            raise OracleContractViolation(f"{self.describe}: separator not a vertex subset")
        if sp.Integer(len(S)) > self.size_bound(H.n):
            raise OracleContractViolation(
                f"{self.describe}: returned {len(S)} vertices, above the declared "
                f"bound c*n^(1-beta) = {sp.nsimplify(self.size_bound(H.n))} at n = {H.n}",
                subgraph=H,
                returned=S,
            )
        rest = [v for v in range(H.n) if v not in S]
        if rest:
            sub, _ = H.induced_subgraph(rest)
            if any(2 * len(comp) > H.n for comp in connected_components(sub)):
                raise OracleContractViolation(
                    f"{self.describe}: returned separator is not balanced",
                    subgraph=H,
                    returned=S,
                )
        return S


# -- fragmentation -------------------------------------------------------------


def fragment_size_bound(oracle: SeparatorOracle, n: int, p: int) -> sp.Expr:
    """The closed-form bound c * 2^beta * n / ((2^beta - 1) * p^beta)."""
    two_b = sp.Integer(2) ** oracle.beta
    return oracle.c * two_b * sp.Integer(n) / ((two_b - 1) * sp.Integer(p) ** oracle.beta)


def fragment(G: Graph, oracle: SeparatorOracle, p: int) -> frozenset[int]:
    """Remove a vertex set S so every component of G - S has at most p vertices.

    Recursively splits any oversized component with the oracle; |S| obeys
    the closed-form bound, which is asserted exactly on every run.
    """
    if p < 1:
        raise DefclustError("p must be >= 1")
    S: set[int] = set()
    while True:
        rest = [v for v in range(G.n) if v not in S]
        if not rest:
            break
        sub, old = G.induced_subgraph(rest)
        big = next((c for c in connected_components(sub) if len(c) > p), None)
        if big is None:
            break
        comp_sub, comp_old = sub.induced_subgraph(big)
        sep = oracle.checked_find(comp_sub)
        S.update(old[big[i]] for i in sep)
    assert sp.Integer(len(S)) <= fragment_size_bound(oracle, G.n, p)
    return frozenset(S)


def fragment_epsilon_component_bound(oracle: SeparatorOracle, eps: Fraction) -> int:
    """ceil(2 * (c / (eps * (2^beta - 1)))^(1/beta))."""
    two_b = sp.Integer(2) ** oracle.beta
    inner = oracle.c / (sp.Rational(eps) * (two_b - 1))
    return _exact_ceil(2 * inner ** (1 / oracle.beta))


def fragment_epsilon(G: Graph, oracle: SeparatorOracle, eps: Fraction) -> frozenset[int]:
    """Fragmentation with |S| <= eps * n; components bounded by the closed form."""
    eps = Fraction(eps)
    if eps <= 0:
        raise DefclustError("eps must be > 0")
    p = fragment_epsilon_component_bound(oracle, eps)
    S = fragment(G, oracle, p)
    assert Fraction(len(S)) <= eps * G.n
    return S


# -- islands from sparsity + separators -------------------------------------------


def island_size_bound(oracle: SeparatorOracle, k: int, alpha: Fraction) -> int:
    """ceil(2 * (c(k+1) / (alpha (2^beta - 1)))^(1/beta))."""
    two_b = sp.Integer(2) ** oracle.beta
    inner = oracle.c * (k + 1) / (sp.Rational(alpha) * (two_b - 1))
    return _exact_ceil(2 * inner ** (1 / oracle.beta))


def separator_island(
    G: Graph, oracle: SeparatorOracle, k: int, alpha: Fraction
) -> tuple[int, ...]:
    """A k-island of bounded size, given |E| < (k+1-alpha)|V|.

    Fragment with eps = alpha/(k+1), take the first component with
    e(K) < (k+1)|K| (edges counted with at least one end in K), and peel
    vertices with more than k outside neighbours; the remainder is a
    non-empty k-island within the closed-form size bound.
    """
    alpha = Fraction(alpha)
    if G.n == 0:
        raise DefclustError("empty graph has no island")
    if not Fraction(G.m) < (k + 1 - alpha) * G.n:
        raise HypothesisViolation(
            f"density hypothesis violated: |E| = {G.m} >= (k+1-alpha)|V| "
            f"= {(k + 1 - alpha) * G.n}",
            witness=G,
        )
    eps = alpha / (k + 1)
    X = fragment_epsilon(G, oracle, eps)
    rest = [v for v in range(G.n) if v not in X]
    sub, old = G.induced_subgraph(rest)
    chosen: Optional[list[int]] = None
    for comp in connected_components(sub):
        verts = [old[i] for i in comp]
        vs = set(verts)
        e_k = sum(1 for v in verts for w in G.neighbours(v) if w in vs and w > v)
        e_k += sum(1 for v in verts for w in G.neighbours(v) if w not in vs)
        if e_k < (k + 1) * len(verts):
            chosen = sorted(verts)
            break
    assert chosen is not None, "some fragment component must be sparse"
    island = set(chosen)
    while True:
        bad = next(
            (
                v
                for v in sorted(island)
                if sum(1 for w in G.neighbours(v) if w not in island) >= k + 1
            ),
            None,
        )
        if bad is None:
            break
        island.remove(bad)
    assert island, "peeling keeps the sparse component non-empty"
    assert len(island) <= island_size_bound(oracle, k, alpha)
    return tuple(sorted(island))


# -- island-loop colourers ----------------------------------------------------------


class IslandLoopRun(NamedTuple):
    colouring: Colouring
    islands: tuple[tuple[int, ...], ...]


def _island_loop(
    G: Graph,
    L: ListAssignment,
    k: int,
    alpha: Fraction,
    oracle: SeparatorOracle,
    density_check: Callable[[Graph], None],
    counting_threshold: int,
    counting_class_bound: int,
) -> IslandLoopRun:
    """Shared loop: small-graph colour counting, else peel a separator island."""
    alive = sorted(range(G.n))
    steps: list[tuple] = []
    while alive:
        sub, old = G.induced_subgraph(alive)
        if len(alive) <= counting_threshold:
            steps.append(("count", old[0]))
            alive = [v for v in alive if v != old[0]]
            continue
        density_check(sub)
        picked = separator_island(sub, oracle, k, alpha)
        island = tuple(sorted(old[i] for i in picked))
        steps.append(("island", island))
        iset = set(island)
        alive = [v for v in alive if v not in iset]

    colour: list[Optional[int]] = [None] * G.n
    coloured: set[int] = set()
    usage: dict[int, int] = {}
    islands: list[tuple[int, ...]] = []
    for step in reversed(steps):
        if step[0] == "count":
            v = step[1]
            best = min(sorted(L[v]), key=lambda c: (usage.get(c, 0), c))
            assert usage.get(best, 0) <= max(counting_class_bound - 1, 0)
            colour[v] = best
            usage[best] = usage.get(best, 0) + 1
            coloured.add(v)
        else:
            island = step[1]
            islands.append(island)
            iset = set(island)
            for v in island:
                taken = {
                    colour[w]
                    for w in G.neighbours(v)
                    if w in coloured and w not in iset
                }
                free = sorted(L[v] - taken)
                assert free, "k outside neighbours but k+1 list colours"
                colour[v] = free[0]
                usage[colour[v]] = usage.get(colour[v], 0) + 1
            coloured |= iset
    chi = Colouring(colour)
    assert respects_lists(chi, L)
    return IslandLoopRun(chi, tuple(islands))


def surface_clustering_bound(g: int) -> int:
    return 1500 * (g + 2)


def surface_four_colour(
    G: Graph, L: ListAssignment, g: int, oracle: Optional[SeparatorOracle] = None
) -> IslandLoopRun:
    """4-list colouring with clustering 1500(g+2) for Euler genus <= g.

    Below 6000g vertices a colour-counting step keeps classes at 1500g;
    above it the edge bound |E| < 3(|V|+g) must hold (else the genus
    hypothesis is reported violated) and a 3-island with alpha = 1999/2000
    is peeled.
    """
    if g < 0:
        raise DefclustError("genus must be >= 0")
    if not L.is_k_list_assignment(4) or len(L) != G.n:
        raise DefclustError("need 4-lists on V(G)")
    if oracle is None:
        oracle = genus_separator_oracle(g)

    def density_check(sub: Graph) -> None:
        if not sub.m < 3 * (sub.n + g):
            raise HypothesisViolation(
                f"genus hypothesis violated: |E| = {sub.m} >= 3(|V|+g) = {3 * (sub.n + g)}",
                witness=sub,
            )

    run = _island_loop(
        G,
        L,
        k=3,
        alpha=Fraction(1999, 2000),
        oracle=oracle,
        density_check=density_check,
        counting_threshold=6000 * g,
        counting_class_bound=1500 * g,
    )
    cert = audit(G, run.colouring)
    assert cert.clustering <= surface_clustering_bound(g)
    assert all(len(i) <= surface_clustering_bound(g) for i in run.islands)
    return run


def minor_free_clustering_bound(t: int) -> int:
    """c_t = ceil(2 * (5 t^(3/2) / (sqrt(2)-1))^2), evaluated exactly."""
    expr = 2 * (5 * sp.Integer(t) ** sp.Rational(3, 2) / (sp.sqrt(2) - 1)) ** 2
    return _exact_ceil(expr)


def minor_free_colour(
    G: Graph, L: ListAssignment, t: int, oracle: Optional[SeparatorOracle] = None
) -> IslandLoopRun:
    """(t-1)-list colouring with clustering c_t for K_t-minor-free graphs, t <= 9.

    Pure island loop with k = t-2 and alpha = 1: every subgraph must have
    fewer than (t-2)n edges, the known extremal bound for t <= 9; a denser
    subgraph is a minor-hypothesis violation.
    """
    if not 4 <= t <= 9:
        raise DefclustError("t must be in 4..9 (exact extremal function known)")
    if not L.is_k_list_assignment(t - 1) or len(L) != G.n:
        raise DefclustError("need (t-1)-lists on V(G)")
    if oracle is None:
        oracle = minor_separator_oracle(t)

    def density_check(sub: Graph) -> None:
        if not sub.m < (t - 2) * sub.n:
            raise HypothesisViolation(
                f"minor hypothesis violated: |E| = {sub.m} >= (t-2)|V| = {(t - 2) * sub.n}",
                witness=sub,
            )

    run = _island_loop(
        G,
        L,
        k=t - 2,
        alpha=Fraction(1),
        oracle=oracle,
        density_check=density_check,
        counting_threshold=0,
        counting_class_bound=0,
    )
    cert = audit(G, run.colouring)
    assert cert.clustering <= minor_free_clustering_bound(t)
    return run


# -- builtin oracles ------------------------------------------------------------------


def exact_separator_oracle(c, beta, cap: int = 24, describe: str = "exact") -> SeparatorOracle:
    """Minimum balanced separator by subset search; refuses above the cap."""

    def find(H: Graph) -> frozenset[int]:
        return min_balanced_separator(H, cap=cap)

    return SeparatorOracle(c=c, beta=beta, find=find, describe=describe)


def bfs_level_separator(H: Graph) -> Optional[frozenset[int]]:
    """Smallest balanced BFS level over all roots, or None when none balances.

    For each root, the level containing the median BFS vertex is balanced
    (prefix and suffix both hold at most half the graph); disconnected
    inputs are handled component-wise, and an empty separator is returned
    when all components are already small.
    """
    if H.n == 0:
        return frozenset()
    comps = connected_components(H)
    big = max(comps, key=len)
    if 2 * len(big) <= H.n:
        return frozenset()
    sub, old = H.induced_subgraph(big)
    best: Optional[frozenset[int]] = None
    for r in range(sub.n):
        lay = bfs_layering(sub, r)
        seen = 0
        for layer in lay.layers:
            before = seen
            seen += len(layer)
            after = sub.n - seen
            if 2 * before <= H.n and 2 * after <= H.n:
                cand = frozenset(old[v] for v in layer)
                if all(2 * len(c) <= H.n for c in _components_without(H, cand)):
                    if best is None or len(cand) < len(best):
                        best = cand
                break
    return best


def _components_without(H: Graph, S: frozenset[int]):
    rest = [v for v in range(H.n) if v not in S]
    if not rest:
        return []
    sub, old = H.induced_subgraph(rest)
    return [tuple(old[v] for v in c) for c in connected_components(sub)]


def planar_bfs_oracle(c=None, beta=sp.Rational(1, 2), exact_cap: int = 24) -> SeparatorOracle:
    """BFS-level heuristic with exact fallback for planar-like inputs.

    Declares the concrete genus-0 constant c = 2*sqrt(3) by default.  The
    heuristic validates balance per call; when no BFS level both balances
    and meets the declared size bound, the exact oracle takes over below
    its cap, else the call fails (never silently weakens the declaration).
    """
    if c is None:
        c = 2 * sp.sqrt(3)
    c = sp.nsimplify(c)
    beta = sp.Rational(beta)

    def find(H: Graph) -> frozenset[int]:
        bound = sp.nsimplify(c * sp.Integer(max(H.n, 1)) ** (1 - beta))
        cand = bfs_level_separator(H)
        if cand is not None and sp.Integer(len(cand)) <= bound:
            return cand
        if H.n <= exact_cap:
            return min_balanced_separator(H, cap=exact_cap)
        raise OracleCapExceeded("planar_bfs_oracle fallback", H.n, exact_cap)

    return SeparatorOracle(c=c, beta=beta, find=find, describe="bfs-level")


def genus_separator_oracle(g: int, exact_cap: int = 24) -> SeparatorOracle:
    """The concrete genus bound c = 2*sqrt(2g+3), beta = 1/2."""
    return planar_bfs_oracle(c=2 * sp.sqrt(2 * g + 3), exact_cap=exact_cap)


def minor_separator_oracle(t: int, exact_cap: int = 24) -> SeparatorOracle:
    """K_t-minor-free separator constant c = t^(3/2), beta = 1/2."""
    return planar_bfs_oracle(c=sp.Integer(t) ** sp.Rational(3, 2), exact_cap=exact_cap)
