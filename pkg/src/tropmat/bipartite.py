"""The matroid MA(G) of a bipartite forest G over a partition of the ground set.

For a tree G, a k-subset B is a basis when, for every edge (i, c),
``|B & A_{V(G+)}| <= |V(G+)|`` where G+ is the component of G - (i, c)
containing the I-side node i. Forests give direct sums over their
components, with an isolated node j contributing U(1, A_j).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from . import matroid as mt
from . import subsets as ss
from .biconvex import BipartiteForest
from .errors import EmptySpec, InputError, PartitionTooSmall
from .matroid import Matroid
from .polytope import HalfSpace, HRep


@dataclass(frozen=True)
class Partition:
    n: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        for j, b in enumerate(blocks):
            if len(b) < 2:
                raise PartitionTooSmall(
                    f"block {j} has {len(b)} element(s); every block needs at least 2"
                )
            if seen & b:
                raise InputError("blocks overlap")
            seen |= b
        if seen != set(range(self.n)):
            raise InputError("blocks do not cover the ground set")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "Partition":
        """Consecutive blocks of the given sizes."""
        if any(s < 2 for s in sizes):
            raise PartitionTooSmall(f"block sizes {list(sizes)} include one below 2")
        blocks, start = [], 0
        for s in sizes:
            blocks.append(frozenset(range(start, start + s)))
            start += s
        return cls(start, tuple(blocks))

    @property
    def k(self) -> int:
        return len(self.blocks)

    def union(self, nodes: Iterable[int]) -> frozenset[int]:
        """A_N: union of the blocks indexed by N."""
        out: frozenset[int] = frozenset()
        for j in nodes:
            out |= self.blocks[j]
        return out

    def mask(self, nodes: Iterable[int]) -> int:
        return ss.to_mask(self.union(nodes))

    def to_json(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]


@dataclass(frozen=True)
class TreeMatroidSpec:
    forest: BipartiteForest
    partition: Partition

    def __post_init__(self):
        if self.forest.k != self.partition.k:
            raise InputError(f"{self.forest.k} nodes but {self.partition.k} blocks")

    @property
    def k(self) -> int:
        return self.forest.k

    @property
    def n(self) -> int:
        return self.partition.n

    def to_json(self) -> dict:
        return {**self.forest.to_json(), "blocks": self.partition.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "TreeMatroidSpec":
        blocks = tuple(frozenset(b) for b in d["blocks"])
        n = sum(len(b) for b in blocks)
        return cls(BipartiteForest(len(blocks), frozenset(tuple(e) for e in d["edges"])), Partition(n, blocks))


def rule_constraints(spec: TreeMatroidSpec) -> list[tuple[frozenset[int], int]]:
    """(node set V(G+), |V(G+)|) for each forest edge."""
    out = []
    for e in sorted(spec.forest.edges):
        side = spec.forest.side_of(e)
        out.append((side, len(side)))
    return out


@lru_cache(maxsize=4096)
def _ma_cached(spec: TreeMatroidSpec) -> Matroid:
    P, F = spec.partition, spec.forest
    cons = [(P.mask(side), r) for side, r in rule_constraints(spec)]
    # rank of each component = its node count, and every block has >= 1 element
    comps = [(P.mask(c), len(c)) for c in F.components]
    bases = []
    for b in ss.k_subsets(spec.n, spec.k):
        if all((m & b).bit_count() == r for m, r in comps) and all((m & b).bit_count() <= r for m, r in cons):
            bases.append(b)
    if not bases:
        raise EmptySpec("no k-subset satisfies the rule")
    return mt.make_matroid(spec.n, bases)


def ma_of_forest(spec: TreeMatroidSpec) -> Matroid:
    """MA(G): exchange-checked; a direct sum over the forest's components."""
    return _ma_cached(spec)


def node_rule_sets(spec: TreeMatroidSpec) -> list[int]:
    """k-subsets obeying the per-node reading |B & A_{V_j}| <= |V_j|.

    V_j = N[j] for j outside I and {j} for j in I. Kept for comparison with
    :func:`ma_of_forest`; the result need not satisfy base exchange.
    """
    P, F = spec.partition, spec.forest
    I = F.I
    nbr = {j: {j} for j in range(spec.k)}
    for i, c in F.edges:
        nbr[c].add(i)
    cons = []
    for j in range(spec.k):
        V = {j} if j in I else nbr[j]
        cons.append((P.mask(V), len(V)))
    comps = [(P.mask(c), len(c)) for c in F.components]
    return [
        b for b in ss.k_subsets(spec.n, spec.k)
        if all((m & b).bit_count() == r for m, r in comps) and all((m & b).bit_count() <= r for m, r in cons)
    ]


def ball_moving_bases(spec: TreeMatroidSpec) -> frozenset[int]:
    """Bases generated from transversals by moving balls along the tree.

    Start with one ball per block (a transversal). A ball in an I-side block i
    may move along a tree edge to an adjacent block c, as long as c has room.
    Every reachable occupation vector, filled with every choice of elements
    inside the blocks, is a basis.
    """
    F, P = spec.forest, spec.partition
    k = spec.k
    adj: dict[int, list[int]] = {j: [] for j in range(k)}
    for i, c in F.edges:
        adj[i].append(c)
    # occupation vectors: count of balls per block
    start = tuple([1] * k)
    seen = {start}
    stack = [start]
    while stack:
        occ = stack.pop()
        for i in range(k):
            if occ[i] == 0:
                continue
            for c in adj[i]:
                new = list(occ)
                new[i] -= 1
                new[c] += 1
                t = tuple(new)
                if t[c] <= len(P.blocks[c]) and t not in seen:
                    seen.add(t)
                    stack.append(t)
    out = set()
    blocks = [sorted(b) for b in P.blocks]
    for occ in seen:
        choices = [list(ss.k_subsets(len(blocks[j]), occ[j])) for j in range(k)]
        for pick in product(*choices):
            m = 0
            for j, sub in enumerate(pick):
                m |= ss.embed(sub, blocks[j])
            out.add(m)
    return frozenset(out)


@dataclass(frozen=True)
class MAFlats:
    edge_flats: tuple[tuple[frozenset[int], int], ...]  # A_{V(G+(i,c))}, |V(G+)|
    node_flats: tuple[tuple[frozenset[int], int], ...]  # A_{V_j}, |V_j|


def ma_nondeg_flats(spec: TreeMatroidSpec) -> MAFlats:
    """Edge flats (non-degenerate) and node flats of MA(G), with their ranks."""
    P, F = spec.partition, spec.forest
    edge = tuple((P.union(side), r) for side, r in rule_constraints(spec))
    I = F.I
    nbr = {j: {j} for j in range(spec.k)}
    for i, c in F.edges:
        nbr[c].add(i)
    node = tuple(
        (P.union({j} if j in I else nbr[j]), 1 if j in I else len(nbr[j])) for j in range(spec.k)
    )
    return MAFlats(edge, node)


def ma_h_rep(spec: TreeMatroidSpec) -> HRep:
    """Delta(k, n) cut by one half-space per forest edge, with one equation per component."""
    P, F = spec.partition, spec.forest
    eqs = tuple((P.union(c), len(c)) for c in F.components)
    ineqs = [HalfSpace(frozenset({x}), 0, "ge") for x in range(spec.n)]
    ineqs += [HalfSpace(frozenset({x}), 1, "le") for x in range(spec.n)]
    ineqs += [HalfSpace(P.union(side), r, "le") for side, r in rule_constraints(spec)]
    return HRep(spec.n, eqs, tuple(ineqs))


def forest_spec(partition: Partition, edges: Iterable[tuple[int, int]]) -> TreeMatroidSpec:
    return TreeMatroidSpec(BipartiteForest(partition.k, frozenset(edges)), partition)
