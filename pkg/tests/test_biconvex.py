import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from tropmat import biconvex as bc
from tropmat.biconvex import BipartiteForest, PolytropeEdge, PolytropeType, VertexExpr, VertexType
from tropmat.errors import EdgeNotInTree, InvalidExpr, KMismatch, NotAFace, NotATree

# 0-based: v_1^{3} v_2^{3,4} at k=4 is C_0={2}, C_1={2,3}
V12 = VertexExpr.from_dict(4, {0: {2}, 1: {2, 3}})
P3 = VertexExpr.from_dict(3, {0: {2}, 1: {2}})


def test_validate_examples():
    assert bc.validate_expr(VertexExpr.generator(4, 0))
    assert bc.validate_expr(V12)
    bad = VertexExpr.from_dict(4, {0: {1}, 1: {0, 2}})
    chk = bc.validate_expr(bad)
    assert not chk and chk.reason
    assert not bc.validate_expr(VertexExpr.from_dict(3, {0: {0, 1}}))
    assert not bc.validate_expr(VertexExpr.from_dict(3, {0: {1}}))
    assert not bc.validate_expr(VertexExpr.from_dict(3, {0: {1, 2}, 1: {2}}))


def test_monomials():
    assert bc.monomial_of(VertexExpr.generator(4, 0)) == (3, 0, 0, 0)
    assert bc.monomial_of(V12) == (1, 2, 0, 0)
    with pytest.raises(InvalidExpr):
        bc.monomial_of(VertexExpr.from_dict(3, {0: {1}}))


def test_vertex_type_and_d_star():
    assert bc.vertex_type(VertexExpr.generator(4, 2)) is VertexType.GENERATOR
    assert bc.vertex_type(V12) is VertexType.TYPE1
    assert V12.cap == {2}
    assert bc.d_star(V12) == {0: {0}, 1: {1, 3}}
    assert bc.d_sets(V12) == {0: {1, 3}, 1: {0}}
    # path 0-3-1-4-2: no child common to all of I
    t0 = VertexExpr.from_dict(5, {0: {3}, 1: {3, 4}, 2: {4}})
    assert bc.validate_expr(t0)
    assert bc.vertex_type(t0) is VertexType.TYPE0


def test_candidate_counts():
    assert [len(bc.candidate_exprs(k)) for k in (3, 4, 5)] == [6, 32, 250]
    # k=3 candidates are exactly the six hexagon vertices
    assert len(bc.candidate_exprs(3)) == comb(4, 2)


def test_k4_candidates_are_type1():
    for e in bc.candidate_exprs(4):
        if len(e.I) > 1:
            assert bc.vertex_type(e) is VertexType.TYPE1


def test_d_star_partition():
    for k in (3, 4, 5):
        for e in bc.candidate_exprs(k):
            if bc.vertex_type(e) is not VertexType.TYPE1:
                continue
            pieces = list(bc.d_star(e).values())
            assert sum(len(p) for p in pieces) == len(frozenset().union(*pieces))
            assert frozenset().union(*pieces) == frozenset(range(k)) - e.cap


def test_d_sets_identity():
    # intersection of D_i over I - J equals the union of D*_j over J
    from itertools import combinations

    for k in (3, 4, 5):
        for e in bc.candidate_exprs(k):
            if bc.vertex_type(e) is not VertexType.TYPE1:
                continue
            D, Ds = bc.d_sets(e), bc.d_star(e)
            I = sorted(e.I)
            for r in range(1, len(I)):
                for J in combinations(I, r):
                    rest = [i for i in I if i not in J]
                    lhs = frozenset.intersection(*(D[i] for i in rest))
                    assert lhs == frozenset().union(*(Ds[j] for j in J))


def test_trees():
    t = bc.tree_of(VertexExpr.generator(4, 1))
    assert t.edges == {(1, 0), (1, 2), (1, 3)}
    assert bc.tree_of(P3).edges == {(0, 2), (1, 2)}
    with pytest.raises(NotATree):
        bc.expr_of_tree(BipartiteForest(3, {(0, 2)}))
    with pytest.raises(NotATree):
        BipartiteForest(3, {(0, 1), (1, 2)})


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**6))
def test_tree_roundtrip(k, seed):
    e = random.Random(seed).choice(bc.candidate_exprs(k))
    assert bc.expr_of_tree(bc.tree_of(e)) == e
    assert VertexExpr.from_json(e.to_json()) == e


def test_adjacency_examples():
    g0 = VertexExpr.generator(3, 0)
    adj = bc.adjacent(g0, P3)
    assert adj is not None
    assert set(adj.removed) == {(0, 1), (1, 2)}
    assert adj.forest.edges == {(0, 2)}
    assert bc.adjacent(g0, VertexExpr.generator(3, 1)) is None
    assert bc.adjacent(g0, g0) is None
    with pytest.raises(KMismatch):
        bc.adjacent(g0, VertexExpr.generator(4, 0))


def test_log_map_examples():
    for c in (1, 2, 3):
        assert bc.log_map(VertexExpr.generator(4, 0), (0, c)) == frozenset(range(4)) - {c}
    dirs = {bc.log_map(V12, f) for f in bc.tree_edges(V12)}
    assert dirs == {frozenset({0}), frozenset({1, 3}), frozenset({0, 1, 2})}
    with pytest.raises(EdgeNotInTree):
        bc.log_map(V12, (0, 3))


def test_log_partition_on_adjacency():
    # on the hexagon the two directions of every edge partition [k];
    # the removed edges share a node iff I differs
    T = _hexagon()
    for e in T.edges:
        assert e.log_a | e.log_b == frozenset(range(3)) and not e.log_a & e.log_b
        shared = set(e.removed[0]) & set(e.removed[1])
        assert len(shared) <= 1
        assert bool(shared) == (T.vertices[e.a].I != T.vertices[e.b].I)


def _hexagon():
    return bc.polytrope_type(bc.candidate_exprs(3))


def test_hexagon_type():
    T = _hexagon()
    assert T.is_maximal()
    assert len(T.edges) == 6
    assert all(T.degree(j) == 2 for j in range(6))
    mons = {bc.monomial_of(v) for v in T.vertices}
    assert mons == bc.degree_monomials(3)
    again = bc.polytrope_type_from_json(T.to_json())
    assert again == T


def test_face_expr_examples():
    g0 = VertexExpr.generator(3, 0)
    assert bc.face_expr([g0]).dim == 0
    fe = bc.face_expr([g0, P3])
    assert fe.C == (frozenset({2}), frozenset(), frozenset())
    assert fe.dim == 1
    whole = bc.face_expr(list(_hexagon().vertices))
    assert whole.dim == 2 and not any(whole.C)
    with pytest.raises(NotAFace):
        bc.face_expr([])
    with pytest.raises(NotAFace):
        bc.face_expr([g0, VertexExpr.generator(3, 1)])


def test_faces_of_hexagon():
    T = _hexagon()
    assert len(bc.faces_of(T, 0)) == 6
    edges = bc.faces_of(T, 1)
    assert len(edges) == 6
    assert all(len(idx) == 2 for _, idx in edges)
    top = bc.faces_of(T, 2)
    assert len(top) == 1 and len(top[0][1]) == 6
    assert bc.faces_of(T, 5) == []


def test_type0_check_vacuous_and_synthetic():
    assert bc.type0_neighbor_check(_hexagon()) == []
    v = VertexExpr.from_dict(5, {0: {3}, 1: {3}, 2: {3, 4}})
    w = VertexExpr.from_dict(5, {0: {3}, 1: {3}, 2: {3}, 4: {3}})
    assert bc.vertex_type(v) is VertexType.TYPE1 and bc.vertex_type(w) is VertexType.TYPE1
    fake = PolytropeEdge(0, 1, ((2, 4), (4, 3)), frozenset({2, 4}), frozenset({0, 1, 3}))
    T = PolytropeType(5, (v, w), (fake,))
    out = bc.type0_neighbor_check(T)
    assert {(x.v, x.w) for x in out} == {(0, 1), (1, 0)}
