import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tropmat import matroid as mt
from tropmat import polytope as pt
from tropmat import subsets as ss
from tropmat.biconvex import BipartiteForest
from tropmat.bipartite import (
    Partition,
    TreeMatroidSpec,
    ball_moving_bases,
    forest_spec,
    ma_h_rep,
    ma_nondeg_flats,
    ma_of_forest,
    node_rule_sets,
    rule_constraints,
)
from tropmat.errors import InputError, PartitionTooSmall

from oracles import brute_exchange

STAR = forest_spec(Partition.from_sizes([2, 2, 2, 2]), [(0, 1), (0, 2), (0, 3)])


def random_tree_spec(rng: random.Random, k: int, sizes=(2, 3)) -> TreeMatroidSpec:
    """Random labelled tree on k nodes, oriented from one colour class to the other."""
    adj = {v: [] for v in range(k)}
    for v in range(1, k):
        u = rng.randrange(v)
        adj[u].append(v)
        adj[v].append(u)
    colour = {0: 0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in colour:
                colour[b] = 1 - colour[a]
                stack.append(b)
    flip = rng.random() < 0.5
    edges = set()
    for a in range(k):
        for b in adj[a]:
            if (colour[a] == 0) != flip:
                edges.add((a, b))
    part = Partition.from_sizes([rng.choice(sizes) for _ in range(k)])
    return forest_spec(part, edges)


def _independent_star_count():
    # |B & A_0| = 0: one block among A_1..A_3 is full, the others give one element each
    # |B & A_0| = 1: one element from every block
    return 3 * 2 * 2 + 2 ** 4


def test_partition():
    P = Partition.from_sizes([2, 3])
    assert P.n == 5 and P.k == 2
    assert P.union([1]) == {2, 3, 4}
    with pytest.raises(PartitionTooSmall):
        Partition.from_sizes([1, 2, 2])
    with pytest.raises(InputError):
        Partition(4, ({0, 1}, {1, 2, 3}))
    with pytest.raises(InputError):
        Partition(5, ({0, 1}, {2, 3}))
    with pytest.raises(InputError):
        forest_spec(P, [(0, 1), (0, 2)])


def test_star_bases():
    M = ma_of_forest(STAR)
    assert len(M.bases) == _independent_star_count() == 28
    assert mt.kappa(M) == 1
    assert M.base_set == ball_moving_bases(STAR)


def test_star_node_rule_is_not_a_matroid():
    fam = node_rule_sets(STAR)
    assert len(fam) == 31
    assert not mt.is_base_collection(fam)
    assert not brute_exchange(fam)
    assert frozenset(fam) > ma_of_forest(STAR).base_set


def test_star_flats():
    M = ma_of_forest(STAR)
    P = STAR.partition
    for c in (1, 2, 3):
        F = P.union(set(range(4)) - {c})
        assert mt.is_flat(M, F) and mt.rank(M, F) == 3
        assert mt.is_nondegenerate(M, F)
        G = P.union({0, c})
        assert mt.is_flat(M, G) and mt.rank(M, G) == 2
    assert mt.is_flat(M, P.union({0})) and mt.rank(M, P.union({0})) == 1
    fl = ma_nondeg_flats(STAR)
    assert sorted(sorted(F) for F, _ in fl.edge_flats) == sorted(
        sorted(P.union(set(range(4)) - {c})) for c in (1, 2, 3)
    )
    assert all(r == 3 for _, r in fl.edge_flats)
    assert dict(fl.node_flats)[P.union({0})] == 1


def test_star_nondegenerate_flats_of_size_gt_one():
    M = ma_of_forest(STAR)
    P = STAR.partition
    big = {F for F in mt.minimal_nondegenerate_flat_masks(M) if F.bit_count() > 1}
    assert big == {P.mask(set(range(4)) - {c}) for c in (1, 2, 3)}


def test_star_h_rep():
    h = ma_h_rep(STAR)
    assert sorted(r for _, r in rule_constraints(STAR)) == [3, 3, 3]
    assert frozenset(h.zero_one_solutions()) == ma_of_forest(STAR).base_set


def test_path():
    spec = forest_spec(Partition.from_sizes([2, 2, 2]), [(0, 2), (1, 2)])
    M = ma_of_forest(spec)
    # |B & A_0| <= 1, |B & A_1| <= 1, rank 3: brute force over 3-subsets
    brute = [b for b in ss.k_subsets(6, 3) if (b & 0b11).bit_count() <= 1 and (b & 0b1100).bit_count() <= 1]
    assert len(brute) == len(M.bases) == 12
    assert M.base_set == frozenset(brute)


def test_forest_direct_sum():
    spec = forest_spec(Partition.from_sizes([2, 2, 2]), [(0, 2)])
    M = ma_of_forest(spec)
    assert mt.kappa(M) == 2
    sub = ma_of_forest(TreeMatroidSpec(BipartiteForest(2, {(0, 1)}), Partition.from_sizes([2, 2])))
    expect = mt.embed_direct_sum(6, [(sub, [0, 1, 4, 5]), (mt.uniform(1, 2), [2, 3])])
    assert M.base_set == expect.base_set
    assert len(ma_h_rep(spec).equations) == 2


def test_spec_json_roundtrip():
    assert TreeMatroidSpec.from_json(STAR.to_json()) == STAR


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_random_trees(k, seed):
    spec = random_tree_spec(random.Random(seed), k)
    M = ma_of_forest(spec)
    assert M.k == k and mt.kappa(M) == 1
    assert brute_exchange(M.bases)
    blocks = [sorted(b) for b in spec.partition.blocks]
    for pick in product(*blocks):
        assert ss.to_mask(pick) in M.base_set
    assert ball_moving_bases(spec) == M.base_set
    assert frozenset(ma_h_rep(spec).zero_one_solutions()) == M.base_set
    for F, r in ma_nondeg_flats(spec).edge_flats:
        assert mt.is_flat(M, F) and mt.rank(M, F) == r
        assert mt.is_nondegenerate(M, F)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_edge_removal_is_a_facet(k, seed):
    # MA(G - e) is the face of MA(G) where the bound of e is tight
    rng = random.Random(seed)
    spec = random_tree_spec(rng, k)
    e = rng.choice(sorted(spec.forest.edges))
    side = spec.forest.side_of(e)
    M = ma_of_forest(spec)
    sub = ma_of_forest(TreeMatroidSpec(spec.forest.remove(e), spec.partition))
    m = spec.partition.mask(side)
    assert sub.base_set == frozenset(b for b in M.bases if (b & m).bit_count() == len(side))
    assert mt.kappa(sub) == 2
    assert pt.face_test(pt.BasePolytope(M), sub.bases)
