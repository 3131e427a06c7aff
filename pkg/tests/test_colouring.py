import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defclust.colouring import (
    Colouring,
    ColourAllocator,
    ListAssignment,
    audit,
    list_violations,
    product_colouring,
    respects_lists,
)
from defclust.errors import DefclustError, PartialColouringError
from defclust.graphs import Graph

from conftest import random_graph


class TestAudit:
    def test_proper_two_colouring_of_c4(self):
        cert = audit(Graph.cycle(4), Colouring([0, 1, 0, 1]))
        assert cert.k == 2 and cert.defect == 0 and cert.clustering == 1

    def test_monochromatic_path(self):
        cert = audit(Graph.path(5), Colouring([0] * 5))
        assert cert.defect == 2 and cert.clustering == 5 and cert.all_paths

    def test_monochromatic_cycle_not_paths(self):
        cert = audit(Graph.cycle(5), Colouring([0] * 5))
        assert not cert.all_paths

    def test_partial_colouring_lists_vertices(self):
        with pytest.raises(PartialColouringError) as e:
            audit(Graph.path(3), Colouring([0, None, None]))
        assert e.value.uncoloured == (1, 2)

    def test_components_partition_vertices(self):
        G = random_graph(15, 0.3, seed=1)
        rng = random.Random(2)
        chi = Colouring([rng.randrange(3) for _ in range(15)])
        cert = audit(G, chi)
        assert sorted(v for comp in cert.components for v in comp) == list(range(15))

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_permutation_invariance(self, seed):
        rng = random.Random(seed)
        G = random_graph(10, 0.35, seed=seed)
        chi = Colouring([rng.randrange(3) for _ in range(10)])
        cert = audit(G, chi)
        perm = list(range(3))
        rng.shuffle(perm)
        cert2 = audit(G, Colouring([perm[c] for c in chi.values]))
        assert (cert.defect, cert.clustering, cert.all_paths) == (
            cert2.defect,
            cert2.clustering,
            cert2.all_paths,
        )
        # idempotent: auditing again changes nothing
        assert audit(G, chi) == cert

    @given(st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_defect_below_clustering(self, seed):
        rng = random.Random(seed)
        G = random_graph(9, 0.4, seed=seed)
        chi = Colouring([rng.randrange(2) for _ in range(9)])
        cert = audit(G, chi)
        if cert.clustering >= 1:
            assert cert.defect <= cert.clustering - 1


class TestLists:
    def test_singleton_match(self):
        L = ListAssignment([[0], [1]])
        assert respects_lists(Colouring([0, 1]), L)

    def test_violation_witness(self):
        L = ListAssignment([[0], [1], [2]])
        assert list_violations(Colouring([0, 0, 2]), L) == (1,)

    def test_k_list_assignment(self):
        assert ListAssignment.uniform(4, 3).is_k_list_assignment(3)
        assert not ListAssignment([[0, 1], [0]]).is_k_list_assignment(2)


class TestProduct:
    def test_single_class_is_relabel(self):
        G = Graph.path(4)
        chi1 = Colouring([0, 0, 0, 0])
        chi2 = Colouring([0, 1, 0, 1])
        out = product_colouring(chi1, [chi2])
        assert out.values == chi2.compact().values

    def test_class_mismatch_rejected(self):
        with pytest.raises(DefclustError, match="class"):
            product_colouring(Colouring([0, 1]), [Colouring([0])])

    def test_lovasz_split_then_two_colour(self):
        from defclust.greedy import lovasz_defective

        G = random_graph(24, 0.35, seed=9)
        assert G.max_degree() <= 14
        chi1 = lovasz_defective(G, 4).colouring
        per_class = []
        audits = []
        for cls in chi1.classes():
            sub, _ = G.induced_subgraph(cls)
            sub_chi = lovasz_defective(sub, 1).colouring
            per_class.append(sub_chi)
            audits.append(audit(sub, sub_chi))
        out = product_colouring(chi1, per_class)
        cert = audit(G, out)
        # product components are exactly the class-colouring components
        assert cert.clustering == max(a.clustering for a in audits)

    def test_k6_proper_product(self):
        from defclust.greedy import lovasz_defective

        G = Graph.complete(6)
        chi1 = lovasz_defective(G, 1).colouring
        per_class = []
        for cls in chi1.classes():
            sub, _ = G.induced_subgraph(cls)
            per_class.append(Colouring(list(range(sub.n))))
        out = product_colouring(chi1, per_class)
        cert = audit(G, out)
        assert cert.defect == 0 and cert.k <= 6


def test_allocator_is_monotone():
    alloc = ColourAllocator()
    assert [alloc.fresh() for _ in range(3)] == [0, 1, 2]
    assert alloc.peek() == 3
