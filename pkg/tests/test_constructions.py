import itertools

import pytest

from defclust.colouring import ListAssignment
from defclust.constructions import (
    gk_circumference_gadget,
    hex_grid,
    high_girth_regular,
    kkn_gadget,
    kst_star,
    outerplanar_gadget,
    random_maximal_outerplanar,
    random_plane_triangulation,
    standard_cluster,
    standard_defect,
    standard_defect_thickness_partition,
    thickness_gadgets,
    xkc_family,
)
from defclust.errors import OracleCapExceeded
from defclust.graphs import Graph, bfs_distances, girth, line_graph
from defclust.oracle import (
    connected_tree_depth,
    exists_colouring_clustering,
    has_minor,
    list_colourable_with_defect,
    min_colours_defect,
)


class TestStandardExamples:
    def test_base_cases(self):
        assert standard_defect(0, 3) == Graph(1)
        assert standard_defect(1, 2) == Graph(4, [(0, 3), (1, 3), (2, 3)])
        assert standard_cluster(1, 3) == Graph.path(4)

    def test_vertex_count_recursion(self):
        for h in range(4):
            for d in (1, 2, 3):
                n = standard_defect(h, d).n
                assert n == ((d + 1) ** (h + 1) - 1) // d

    def test_root_is_dominant(self):
        S = standard_defect(2, 2)
        assert S.degree(S.n - 1) == S.n - 1

    def test_is_closure_of_tree(self):
        # ctd(S(h,d)) = h+1: the closure of the complete (d+1)-ary tree
        for h, d in ((1, 2), (2, 1), (2, 2), (3, 1)):
            assert connected_tree_depth(standard_defect(h, d)) == h + 1

    def test_cluster_sizes(self):
        assert standard_cluster(2, 2).n == 7
        assert standard_cluster(3, 3).n == 40

    def test_cluster_outerplanar(self):
        S = standard_cluster(2, 3)
        assert not has_minor(S, Graph.complete(4))
        assert not has_minor(S, Graph.complete_bipartite(2, 3))


class TestKstStar:
    def test_trivial_s1(self):
        assert kst_star(1, 4) == Graph.complete_bipartite(1, 4)

    def test_counts(self):
        assert kst_star(2, 2).n == 5
        assert kst_star(7, 13).n == 7 + 13 + 21

    def test_pair_vertices_have_degree_two(self):
        G = kst_star(3, 4)
        for v in range(7, G.n):
            assert G.degree(v) == 2


class TestHexGrid:
    def test_arc_distances(self):
        for k in (2, 3):
            hx = hex_grid(k)
            dist = {v: d for v, d in enumerate(bfs_distances(hx.tri.graph, hx.arc_ab[0]))}
            # opposite arcs at distance >= k, verified by BFS from every arc vertex
            for src, dst in ((hx.arc_ab, hx.arc_cd), (hx.arc_bc, hx.arc_da)):
                for s in src:
                    d = bfs_distances(hx.tri.graph, s)
                    assert min(d[t] for t in dst) >= k

    def test_max_degree_six(self):
        for k in range(2, 11):
            assert hex_grid(k).tri.graph.max_degree() <= 6

    def test_faces_are_triangles(self):
        hx = hex_grid(3)
        assert all(len(set(f)) == 3 for f in hx.tri.faces)


class TestOuterplanarGadget:
    def test_oracle_certifies_defect_one(self):
        gad = outerplanar_gadget()
        assert min_colours_defect(gad, 1) == 3

    def test_two_colourable_with_defect_two(self):
        assert min_colours_defect(outerplanar_gadget(), 2) == 2

    def test_outerplanar_minor_free(self):
        gad = outerplanar_gadget()
        assert not has_minor(gad, Graph.complete(4))
        assert not has_minor(gad, Graph.complete_bipartite(2, 3))


class TestKknGadget:
    def test_sizes(self):
        G, L = kkn_gadget(1, 0)
        assert G.n == 2 and all(len(L[v]) == 1 for v in range(2))
        G2, L2 = kkn_gadget(2, 1)
        assert G2.n == 2 + 12
        assert all(len(L2[v]) == 2 for v in range(G2.n))

    def test_not_colourable_at_design_defect(self):
        for s, d in ((1, 0), (1, 1), (2, 1)):
            G, L = kkn_gadget(s, d)
            ok, _ = list_colourable_with_defect(G, L, d)
            assert not ok


class TestXkc:
    def test_level_one_members(self):
        assert xkc_family(1, 3, ("path",)) == Graph.path(4)
        assert xkc_family(1, 3, ("star",)) == Graph.star(3)

    def test_prime_on_star(self):
        assert xkc_family(2, 2, ("star", "prime")).n == 7

    def test_rainbow_lemma_exhaustively(self):
        # every colouring of an X_{2,2} member with clustering 2 has a rainbow K_3
        G = xkc_family(2, 2, ("star", "prime"))
        triangles = [
            t
            for t in itertools.combinations(range(G.n), 3)
            if all(G.has_edge(a, b) for a, b in itertools.combinations(t, 2))
        ]
        for part in _set_partitions(G.n):
            colour = [0] * G.n
            for i, block in enumerate(part):
                for v in block:
                    colour[v] = i
            if _clustering_of(G, colour) > 2:
                continue
            assert any(
                len({colour[a] for a in t}) == 3 for t in triangles
            ), f"no rainbow triangle under {colour}"

    def test_not_k_colourable_with_clustering(self):
        G = xkc_family(2, 2, ("star", "prime"))
        assert not exists_colouring_clustering(G, 2, 2)
        G2 = xkc_family(2, 2, ("path", "prime"))
        assert not exists_colouring_clustering(G2, 2, 2)

    def test_cap(self):
        with pytest.raises(OracleCapExceeded):
            xkc_family(4, 4, ("path", "prime", "prime", "prime"), cap=100)


def _set_partitions(n):
    if n == 0:
        yield []
        return
    for part in _set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1 :]
        yield part + [[n - 1]]


def _clustering_of(G, colour):
    best = 0
    seen = set()
    for s in range(G.n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for w in G.neighbours(v):
                if colour[w] == colour[s] and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        best = max(best, len(comp))
    return best


class TestGkGadget:
    def test_base_case(self):
        assert gk_circumference_gadget(2, 3) == Graph.path(4)

    def test_g3_size(self):
        assert gk_circumference_gadget(3, 2).n == 3 + 2 * 3 * 3

    def test_no_small_clustering_colouring(self):
        from defclust.oracle import min_colours_clustering

        g3 = gk_circumference_gadget(3, 2)
        assert min_colours_clustering(g3, 2, cap=50) == 4  # 2k-3 = 3 impossible

    def test_minor_example_at_cap_scale(self):
        # H_2 = S(1,2) = K_{1,3} is not a minor of G_2 = P_3
        assert not has_minor(gk_circumference_gadget(2, 2), standard_defect(1, 2))
        # the k=3 instance has |V(H)| = 13 > 8: the oracle refuses per its cap
        with pytest.raises(OracleCapExceeded):
            has_minor(gk_circumference_gadget(3, 2), standard_defect(2, 2))


class TestThickness:
    def test_subdivision_counts(self):
        tw = thickness_gadgets(4)
        assert tw.graph.n == 10 and tw.graph.m == 12

    def test_parts_cover_and_planar(self):
        tw = thickness_gadgets(4)
        union = set(tw.parts[0]) | set(tw.parts[1])
        assert union == set(tw.graph.edges())
        for part in tw.parts:
            sub = Graph(tw.graph.n, part)
            assert not has_minor(sub, Graph.complete(5))
            assert not has_minor(sub, Graph.complete_bipartite(3, 3))

    def test_standard_example_partition(self):
        # S(2k,d) decomposes into k planar layers
        for k, d in ((1, 2), (2, 1)):
            S = standard_defect(2 * k, d)
            parts = standard_defect_thickness_partition(k, d)
            assert len(parts) == k
            assert set().union(*parts) == set(S.edges())
            for part in parts:
                sub = Graph(S.n, part)
                assert not has_minor(sub, Graph.complete(5), g_cap=S.n)
                assert not has_minor(sub, Graph.complete_bipartite(3, 3), g_cap=S.n)


class TestHighGirthRegular:
    def test_three_regular_girth_five(self):
        G = high_girth_regular(3, 4, seed=0)
        assert all(G.degree(v) == 3 for v in range(G.n))
        assert girth(G) >= 5

    def test_line_graph_degree_identity(self):
        G = high_girth_regular(3, 3, seed=1)
        L = line_graph(G)
        assert all(L.degree(v) == 2 * 3 - 2 for v in range(L.n))

    def test_deterministic_per_seed(self):
        assert high_girth_regular(3, 4, seed=5) == high_girth_regular(3, 4, seed=5)


class TestRandomGenerators:
    def test_triangulation_valid(self):
        for seed in range(5):
            T = random_plane_triangulation(30, seed=seed)
            assert T.graph.m == 3 * T.graph.n - 6

    def test_maximal_outerplanar(self):
        G = random_maximal_outerplanar(25, seed=0)
        assert G.m == 2 * 25 - 3
        assert not has_minor(G, Graph.complete(4))
        assert not has_minor(G, Graph.complete_bipartite(2, 3))
