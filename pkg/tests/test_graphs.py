from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from distclass.catalog import reference_icosahedron
from distclass.graphs import (
    BudgetExceeded,
    GraphError,
    SmallGraph,
    TooManyVertices,
    WrongOrder,
    canonical_form,
    check_lemma12,
    diameter_graph,
    find_disjoint_odd_cycles,
    generate_triangle_free_alpha_le,
    independence_number,
    induced_odd_cycles,
    sampled_check,
)


def brute_alpha(g: SmallGraph) -> int:
    for k in range(g.n, 0, -1):
        for s in combinations(range(g.n), k):
            if all(not g.has_edge(u, v) for u, v in combinations(s, 2)):
                return k
    return 0


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))
    return SmallGraph.from_edges(n, [(u, v) for u, v in edges if u != v])


def test_small_graph_validation():
    with pytest.raises(TooManyVertices):
        SmallGraph.complete(17)
    with pytest.raises(GraphError):
        SmallGraph(2, (0b01, 0))  # loop


def test_petersen():
    p = SmallGraph.petersen()
    assert independence_number(p) == 4
    assert not p.has_triangle()
    assert find_disjoint_odd_cycles(p) == ((0, 1, 2, 3, 4), (5, 7, 9, 6, 8))


def test_c5_has_no_disjoint_pair():
    c5 = SmallGraph.cycle(5)
    assert independence_number(c5) == 2
    assert induced_odd_cycles(c5) == [(0, 1, 2, 3, 4)]
    assert find_disjoint_odd_cycles(c5) is None


@given(graphs())
def test_alpha_matches_brute_force(g):
    assert independence_number(g) == brute_alpha(g)


@given(graphs(max_n=9), st.randoms())
def test_canonical_form_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = SmallGraph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges])
    assert canonical_form(g) == canonical_form(h)


@given(graphs(max_n=8), graphs(max_n=8))
def test_canonical_form_separates_non_isomorphic(g, h):
    same = g.n == h.n and nx.is_isomorphic(g.to_networkx(), h.to_networkx())
    assert (canonical_form(g) == canonical_form(h)) == same


def test_graph6_roundtrip():
    p = SmallGraph.petersen()
    assert SmallGraph.from_graph6(p.to_graph6()) == p


def test_icosahedron_diameter_graph_is_a_matching():
    dg = diameter_graph(reference_icosahedron())
    assert dg.degrees() == [1] * 12
    assert independence_number(dg) == 6


@pytest.mark.parametrize("n,amax,count", [(5, 2, 1), (6, 2, 0), (8, 3, 3), (13, 4, 1)])
def test_generation_counts(n, amax, count):
    # n=8, alpha<=3 triangle-free: the Ramsey(3,4) graphs on 8 vertices
    assert len(list(generate_triangle_free_alpha_le(n, amax))) == count


def test_generation_matches_networkx_dedupe_for_small_orders():
    # every labelled graph up to order 6, deduplicated by networkx isomorphism
    for n in range(1, 7):
        pool = []
        for mask in range(1 << (n * (n - 1) // 2)):
            pairs = [e for k, e in enumerate(combinations(range(n), 2)) if mask >> k & 1]
            g = SmallGraph.from_edges(n, pairs)
            if g.has_triangle() or independence_number(g) > 3:
                continue
            h = g.to_networkx()
            if not any(nx.is_isomorphic(h, o) for o in pool):
                pool.append(h)
        assert len(list(generate_triangle_free_alpha_le(n, 3))) == len(pool), n


def test_order_12_lemma():
    gs = list(generate_triangle_free_alpha_le(12, 4))
    assert len(gs) == 12
    for g in gs:
        rep = check_lemma12(g)
        assert rep.hypothesis and rep.holds
        a, b = find_disjoint_odd_cycles(g)
        assert len(a) == len(b) == 5 and not set(a) & set(b)


def test_lemma_needs_order_12():
    with pytest.raises(WrongOrder):
        check_lemma12(SmallGraph.petersen())


def test_generation_limits_and_budget():
    with pytest.raises(GraphError):
        list(generate_triangle_free_alpha_le(15, 4))
    with pytest.raises(BudgetExceeded) as info:
        list(generate_triangle_free_alpha_le(12, 4, budget=0.0))
    assert info.value.level is not None


def test_sampled_check_is_flagged():
    rep = sampled_check(12, 4, lambda g: check_lemma12(g).holds, branches=30, seed=1)
    assert rep.sampled and rep.branches == 30 and rep.passed == rep.reached
