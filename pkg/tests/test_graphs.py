import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defclust.errors import DefclustError
from defclust.graphs import (
    Graph,
    Layering,
    PlaneTriangulation,
    TPartition,
    bfs_layering,
    blocks_and_cutvertices,
    connected_components,
    contract_set,
    line_graph,
    mad_bruteforce,
    mad_exact,
)

from conftest import random_connected_graph, random_graph


@st.composite
def small_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


class TestBfsLayering:
    def test_single_vertex(self):
        lay = bfs_layering(Graph(1), 0)
        assert lay.layers == ((0,),)

    def test_path_distances(self):
        lay = bfs_layering(Graph.path(3), 0)
        assert lay.layers == ((0,), (1,), (2,))

    def test_grid_corner(self):
        # 5x5 grid from a corner: 9 layers of sizes 1,2,3,4,5,4,3,2,1
        G = Graph.grid(5, 5)
        lay = bfs_layering(G, 0)
        assert [len(l) for l in lay.layers] == [1, 2, 3, 4, 5, 4, 3, 2, 1]
        lay.check(G)

    def test_disconnected_reports_unreached(self):
        G = Graph(4, [(0, 1), (2, 3)])
        with pytest.raises(DefclustError, match="unreachable"):
            bfs_layering(G, 0)

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_edge_span_property(self, G):
        for comp in connected_components(G):
            sub, _ = G.induced_subgraph(comp)
            lay = bfs_layering(sub, 0)
            lay.check(sub)  # raises on any spanning edge


class TestMad:
    def test_complete(self):
        assert mad_exact(Graph.complete(4)) == 3

    def test_tree(self):
        for n in (2, 5, 9):
            assert mad_exact(Graph.path(n)) == Fraction(2 * (n - 1), n)

    def test_empty_graph(self):
        assert mad_exact(Graph(0)) == 0
        assert mad_exact(Graph.empty(5)) == 0

    def test_lower_bound_whole_graph(self):
        G = random_graph(12, 0.4, seed=5)
        assert mad_exact(G) >= Fraction(2 * G.m, G.n)

    @given(small_graphs(max_n=8))
    @settings(max_examples=40, deadline=None)
    def test_matches_bruteforce(self, G):
        assert mad_exact(G) == mad_bruteforce(G)

    def test_standard_example_matches_oracle(self):
        from defclust.constructions import standard_defect

        S = standard_defect(2, 2)
        assert mad_exact(S) == mad_bruteforce(S)


class TestBlocks:
    def test_triangle_one_block(self):
        blocks, cuts = blocks_and_cutvertices(Graph.complete(3))
        assert len(blocks) == 1 and not cuts

    def test_two_triangles_sharing_vertex(self):
        G = Graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])
        blocks, cuts = blocks_and_cutvertices(G)
        assert len(blocks) == 2
        assert cuts == frozenset({2})

    def test_edge_partition(self):
        G = random_connected_graph(30, 0.05, seed=7)
        blocks, _ = blocks_and_cutvertices(G)
        all_edges = [e for b in blocks for e in b.edges]
        assert sorted(all_edges) == sorted(G.edges())
        assert len(set(all_edges)) == len(all_edges)

    def test_against_cycle_equivalence_bruteforce(self):
        # two edges share a block iff some simple cycle contains both
        G = random_connected_graph(11, 0.12, seed=3)
        cycles = _all_simple_cycles(G)
        import collections

        together = collections.defaultdict(set)
        for cyc in cycles:
            ces = [
                (min(a, b), max(a, b)) for a, b in zip(cyc, cyc[1:] + cyc[:1])
            ]
            for e, f in itertools.combinations(ces, 2):
                together[e].add(f)
                together[f].add(e)
        blocks, _ = blocks_and_cutvertices(G)
        for b in blocks:
            for e, f in itertools.combinations(b.edges, 2):
                assert f in _closure(together, e), (e, f)

    def test_against_networkx(self):
        import networkx as nx

        G = random_connected_graph(30, 0.08, seed=11)
        H = nx.Graph(list(G.edges()))
        H.add_nodes_from(range(G.n))
        ours = {frozenset(b.vertices) for b in blocks_and_cutvertices(G)[0] if b.edges}
        theirs = {frozenset(c) for c in nx.biconnected_components(H)}
        assert ours == theirs
        assert set(blocks_and_cutvertices(G)[1]) == set(nx.articulation_points(H))


def _closure(rel, e):
    out = {e}
    frontier = [e]
    while frontier:
        x = frontier.pop()
        for y in rel[x]:
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


def _all_simple_cycles(G):
    cycles = []
    for s in range(G.n):
        path = [s]
        onpath = {s}

        def dfs(v):
            for w in G.neighbours(v):
                if w == s and len(path) >= 3:
                    cycles.append(list(path))
                elif w > s and w not in onpath:
                    onpath.add(w)
                    path.append(w)
                    dfs(w)
                    path.pop()
                    onpath.discard(w)

        dfs(s)
    return cycles


class TestContraction:
    def test_singleton_identity(self):
        G = Graph.cycle(5)
        H = contract_set(G, [3])
        assert H.n == 5 and H.m == 5

    def test_c4_edge_gives_triangle(self):
        H = contract_set(Graph.cycle(4), [0, 1])
        assert H.n == 3 and H.m == 3

    def test_grid_first_row(self):
        G = Graph.grid(4, 4)
        H = contract_set(G, [0, 1, 2, 3])
        # remaining 3x4 grid + one vertex adjacent to the whole second row
        expected = Graph(
            13,
            list(Graph.grid(3, 4).edges()) + [(12, 0), (12, 1), (12, 2), (12, 3)],
        )
        assert H == expected

    def test_disconnected_set_rejected(self):
        with pytest.raises(DefclustError, match="not connected"):
            contract_set(Graph.path(5), [0, 4])

    @given(small_graphs(max_n=8), st.integers(0, 7))
    @settings(max_examples=40, deadline=None)
    def test_count_and_no_loops(self, G, s):
        if G.n == 0:
            return
        s %= G.n
        comp = next(c for c in connected_components(G) if s in c)
        H = contract_set(G, comp)
        assert H.n == G.n - len(comp) + 1


class TestEmbeddedTypes:
    def test_triangulation_invariants(self):
        PlaneTriangulation(Graph.complete(4), ((0, 1, 3), (0, 2, 3), (1, 2, 3)), (0, 1, 2))
        with pytest.raises(DefclustError, match="Euler"):
            PlaneTriangulation(Graph.complete(4), ((0, 1, 3),), (0, 1, 2))

    def test_tpartition_adhesion(self):
        G = Graph.star(4)
        tp = TPartition(Graph.path(5), tuple(frozenset([i]) for i in range(5)))
        tp.validate_partition(G)
        # tree path 0-1-2-3-4, star centred at 0: edge (3,4) cut by star edge 0-4
        assert len(tp.crossing_edges(G, (3, 4))) == 1
        assert tp.adhesion(G) == 4  # all four star edges cross the (0,1) tree edge

    def test_line_graph_regularity(self):
        G = Graph.cycle(6)
        L = line_graph(G)
        assert all(L.degree(v) == 2 for v in range(L.n))
