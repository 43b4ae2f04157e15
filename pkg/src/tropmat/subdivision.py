"""Matroid subdivisions of hypersimplices dual to polytropes, and their checks.

``build_sigma_star`` turns each polytrope vertex into the cell BP of
MA(G^v); ``verify_subdivision`` certifies a tiling by face-fitting, facet
pairing, base-set union and random interior samples. The rank-4 helpers
rebuild the coarse subdivision cut out by the hyperplanes x(A_i) = 1.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from . import bipartite as bp
from . import matroid as mt
from . import polytope as pt
from . import subsets as ss
from .biconvex import BipartiteForest, Check, PolytropeType, VertexExpr, tree_edges, tree_of
from .errors import (
    EmptyResult,
    InvalidI,
    NotABasePolytope,
    NotMaximal,
    NotVerified,
    PartitionTooSmall,
    WrongKind,
)
from .matroid import Matroid
from .polytope import BasePolytope, HalfSpace, Tiling


def cell_matroid(v: VertexExpr, partition: bp.Partition) -> Matroid:
    return bp.ma_of_forest(bp.TreeMatroidSpec(tree_of(v), partition))


def build_sigma_star(T: PolytropeType, partition: bp.Partition) -> Tiling:
    """One cell BP_{MA(G^v)} in Delta(k, n) per vertex v, in vertex order."""
    if not T.is_maximal():
        raise NotMaximal(f"{len(T.vertices)} vertices, a maximal type has {T.max_vertices}")
    if partition.k != T.k:
        raise PartitionTooSmall(f"{partition.k} blocks for k={T.k}")
    if partition.n < 2 * T.k:
        raise PartitionTooSmall(f"ground set of size {partition.n} < 2k = {2 * T.k}")
    cells = tuple(BasePolytope(cell_matroid(v, partition)) for v in T.vertices)
    return Tiling(T.k, partition.n, cells, tuple(T.vertices))


def build_sigma(T: PolytropeType, partition: bp.Partition) -> Tiling:
    """The dual-side tiling of Delta(n-k, n)."""
    return build_sigma_star(T, partition).dual()


# facets


@dataclass(frozen=True)
class Facet:
    vertices: frozenset[int]
    inequality: HalfSpace
    boundary: bool


def cell_facets(P: BasePolytope) -> list[Facet]:
    """Facets of P, one per distinct vertex set, from its H-description."""
    M = P.matroid
    kap = mt.kappa(M)
    full = ss.full(M.n)
    seen: dict[frozenset[int], Facet] = {}
    for h in P.hrep.inequalities:
        m = h.mask
        face = frozenset(b for b in M.bases if (m & b).bit_count() == h.bound)
        if not face or face in seen or len(face) == len(M.bases):
            continue
        if mt.kappa(Matroid(M.n, M.k, tuple(face))) != kap + 1:
            continue
        inter = full
        union = 0
        for b in face:
            inter &= b
            union |= b
        boundary = bool(inter) or union != full
        seen[face] = Facet(face, h, boundary)
    return sorted(seen.values(), key=lambda f: sorted(f.vertices))


def _facet_key(f: frozenset[int]) -> tuple:
    return tuple(sorted(f))


# reports


@dataclass
class FacetEntry:
    cell: int
    facet: Facet
    partner: str | int | list[int]  # "boundary", a cell index, or a list on failure


@dataclass
class DualGraph:
    nodes: int
    edges: list[tuple[int, int, frozenset[int], int]]  # a, b, defining flat (of a), rank

    def adjacency(self) -> dict[int, set[int]]:
        adj = {v: set() for v in range(self.nodes)}
        for a, b, _, _ in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def edge_set(self) -> set[frozenset[int]]:
        return {frozenset((a, b)) for a, b, _, _ in self.edges}

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": [{"cells": [a, b], "flat": sorted(F), "rank": r} for a, b, F, r in self.edges],
        }

    def to_dot(self, name: str = "dual") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.nodes):
            lines.append(f"  {v};")
        for a, b, F, r in self.edges:
            label = "{" + ",".join(map(str, sorted(F))) + "}" + f" r={r}"
            lines.append(f'  {a} -- {b} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class SubdivisionReport:
    cells: int
    face_fitting: list[list[bool]]
    pairing: list[FacetEntry]
    samples_passed: int
    samples_total: int
    union_complete: bool
    missing_bases: list[int]
    common_matroid: Matroid | None
    dual: DualGraph
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        def partner(p):
            return p if isinstance(p, (str, int)) else list(p)

        return {
            "ok": self.ok,
            "cells": self.cells,
            "face_fitting": self.face_fitting,
            "facet_pairing": [
                {"cell": e.cell, "facet": e.facet.inequality.to_json(), "partner": partner(e.partner)}
                for e in self.pairing
            ],
            "coverage": {"passed": self.samples_passed, "total": self.samples_total},
            "union_complete": self.union_complete,
            "common_cell": self.common_matroid.to_json() if self.common_matroid else None,
            "dual_graph": self.dual.to_json(),
            "failures": self.failures,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def sample_points(k: int, n: int, count: int, seed: int) -> list[tuple[list[int], int]]:
    """Random rational points of Delta(k, n) as (numerators, denominator)."""
    rng = random.Random(seed)
    verts = list(ss.k_subsets(n, k))
    out = []
    for _ in range(count):
        m = rng.randint(1, min(len(verts), n + 1))
        chosen = rng.sample(verts, m)
        w = [rng.randint(1, 50) for _ in chosen]
        num = [0] * n
        for b, wt in zip(chosen, w):
            for i in ss.members(b):
                num[i] += wt
        out.append((num, sum(w)))
    return out


def _pairwise_fitting(T: Tiling) -> list[list[bool]]:
    m = len(T.cells)
    mat = [[True] * m for _ in range(m)]
    for a, b in combinations(range(m), 2):
        ok, _ = pt.is_face_fitting(T.cells[a], T.cells[b])
        mat[a][b] = mat[b][a] = ok
    return mat


def _facet_table(T: Tiling) -> tuple[list[list[Facet]], dict[tuple, list[int]]]:
    facets = [cell_facets(c) for c in T.cells]
    owners: dict[tuple, list[int]] = {}
    for j, fs in enumerate(facets):
        for f in fs:
            owners.setdefault(_facet_key(f.vertices), []).append(j)
    return facets, owners


def dual_graph(T: Tiling) -> DualGraph:
    """Edges join cells sharing a facet, labelled by the lower cell's defining flat."""
    facets, owners = _facet_table(T)
    edges = []
    for a, fs in enumerate(facets):
        for f in fs:
            for b in owners[_facet_key(f.vertices)]:
                if b > a:
                    h = f.inequality
                    M = T.cells[a].matroid
                    flat = h.support if h.sense == "le" else frozenset(range(M.n)) - h.support
                    edges.append((a, b, flat, mt.rank(M, flat)))
    edges.sort(key=lambda e: (e[0], e[1]))
    return DualGraph(len(T.cells), edges)


def verify_subdivision(T: Tiling, samples: int = 1000, seed: int = 0) -> SubdivisionReport:
    failures: list[str] = []
    fit = _pairwise_fitting(T)
    for a, b in combinations(range(len(T.cells)), 2):
        if not fit[a][b]:
            failures.append(f"cells {a} and {b} are not face-fitting")

    facets, owners = _facet_table(T)
    pairing = []
    for j, fs in enumerate(facets):
        for f in fs:
            others = [c for c in owners[_facet_key(f.vertices)] if c != j]
            if f.boundary:
                partner: str | int | list[int] = "boundary"
                if others:
                    failures.append(f"boundary facet {f.inequality.to_json()} of cell {j} shared with {others}")
            elif len(others) == 1:
                partner = others[0]
            else:
                partner = others
                failures.append(
                    f"cell {j} facet {f.inequality.to_json()} is shared with {len(others)} other cells {others}"
                )
            pairing.append(FacetEntry(j, f, partner))

    covered = frozenset().union(*(c.matroid.base_set for c in T.cells)) if T.cells else frozenset()
    missing = [b for b in ss.k_subsets(T.n, T.k) if b not in covered]
    if missing:
        failures.append(f"{len(missing)} k-subsets lie in no cell, first {sorted(ss.members(missing[0]))}")

    passed = 0
    pts = sample_points(T.k, T.n, samples, seed)
    for num, den in pts:
        if any(c.hrep.contains_scaled(num, den) for c in T.cells):
            passed += 1
        elif len(failures) < 50:
            failures.append(f"sample point {num}/{den} lies in no cell")

    common = T.common_bases()
    common_m = None
    if common:
        try:
            common_m = mt.make_matroid(T.n, common)
        except mt.ExchangeViolation as exc:
            failures.append(f"common intersection is not a matroid: {exc}")

    return SubdivisionReport(
        cells=len(T.cells),
        face_fitting=fit,
        pairing=pairing,
        samples_passed=passed,
        samples_total=len(pts),
        union_complete=not missing,
        missing_bases=missing,
        common_matroid=common_m,
        dual=dual_graph(T),
        failures=failures,
    )


def check_duality(
    T: Tiling, ptype: PolytropeType, partition: bp.Partition, report: SubdivisionReport | None = None
) -> Check:
    """Dual graph equals the 1-skeleton under vertex i -> cell i, with facets on x(A_N) = |N|."""
    report = report if report is not None else verify_subdivision(T, samples=0)
    if not report.ok:
        raise NotVerified("tiling failed verification: " + report.failures[0])
    if len(T.cells) != len(ptype.vertices):
        return Check(False, "cell count differs from vertex count")
    skel = {frozenset((e.a, e.b)) for e in ptype.edges}
    if report.dual.edge_set() != skel:
        return Check(False, "dual graph and 1-skeleton differ")
    for e in ptype.edges:
        common = T.cells[e.a].matroid.base_set & T.cells[e.b].matroid.base_set
        N = e.log_a
        mask = partition.mask(N)
        if any((mask & b).bit_count() != len(N) for b in common):
            return Check(False, f"shared facet of {e.a},{e.b} is off x(A_{sorted(N)}) = {len(N)}")
        forest = BipartiteForest(ptype.k, tree_edges(ptype.vertices[e.a]) - {e.removed[0]})
        expect = bp.ma_of_forest(bp.TreeMatroidSpec(forest, partition))
        if expect.base_set != common:
            return Check(False, f"shared facet of {e.a},{e.b} is not MA of the common forest")
    return Check(True)


def _nx(adj: dict[int, set[int]]) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(adj)
    G.add_edges_from((a, b) for a, nb in adj.items() for b in nb)
    return G


def is_isomorphic(adj1: dict[int, set[int]], adj2: dict[int, set[int]]) -> bool:
    return nx.is_isomorphic(_nx(adj1), _nx(adj2))


def skeleton_adjacency(T: PolytropeType) -> dict[int, set[int]]:
    return {v: set(T.neighbours(v)) for v in range(len(T.vertices))}


# rank 4 catalog


@dataclass(frozen=True)
class TildeCell:
    kind: str  # "first", "second" or "third"
    le: frozenset[int]  # blocks with x(A_j) <= 1
    ge: frozenset[int]  # blocks with x(A_j) >= 1

    def halfspaces(self, partition: bp.Partition) -> list[HalfSpace]:
        return [pt.le(partition.blocks[j], 1) for j in sorted(self.le)] + [
            pt.ge(partition.blocks[j], 1) for j in sorted(self.ge)
        ]

    def __str__(self) -> str:
        return f"{self.kind}(le={sorted(self.le)}, ge={sorted(self.ge)})"


def tilde_labels(k: int = 4) -> list[TildeCell]:
    """The 14 sign patterns of x(A_j) - 1 giving maximal cells for k = 4."""
    if k != 4:
        raise WrongKind("the catalog is for k = 4")
    out = []
    for i in range(4):
        rest = frozenset(range(4)) - {i}
        out.append(TildeCell("first", frozenset(), rest))
    for i in range(4):
        rest = frozenset(range(4)) - {i}
        out.append(TildeCell("second", rest, frozenset()))
    for pair in combinations(range(4), 2):
        le_ = frozenset(pair)
        out.append(TildeCell("third", le_, frozenset(range(4)) - le_))
    return out


def _cell_from_halfspaces(k: int, n: int, hs: Sequence[HalfSpace]) -> BasePolytope:
    return pt.intersect_halfspaces(pt.hypersimplex(k, n), hs)


def build_tilde(partition: bp.Partition) -> Tiling:
    """Delta(4, n) cut by every hyperplane x(A_i) = 1: 14 exchange-verified cells."""
    if partition.k != 4:
        raise WrongKind(f"need 4 blocks, got {partition.k}")
    labels = tilde_labels(4)
    cells = tuple(_cell_from_halfspaces(4, partition.n, c.halfspaces(partition)) for c in labels)
    return Tiling(4, partition.n, cells, tuple(labels))


def valid_split_sets(cell: TildeCell) -> list[frozenset[int]]:
    """The four sets I = {i1 or i2} + {i3 or i4} allowed for a third-kind cell."""
    if cell.kind != "third":
        raise WrongKind(f"{cell} is not of the third kind")
    return [frozenset((a, b)) for a in sorted(cell.le) for b in sorted(cell.ge)]


def mid_poly_halfspaces(cell: TildeCell, I: Iterable[int], partition: bp.Partition) -> list[HalfSpace]:
    """x(A_{le - I}) <= 1, x(A_{I - le}) >= 1, x(A_I) <= 2."""
    I = frozenset(I)
    if I not in valid_split_sets(cell):
        raise InvalidI(f"I={sorted(I)} is not a valid split set for {cell}")
    (a,) = cell.le - I
    (b,) = I - cell.le
    return [pt.le(partition.blocks[a], 1), pt.ge(partition.blocks[b], 1), pt.le(partition.union(I), 2)]


def refine_third_kind(
    cell: TildeCell, I: Iterable[int], partition: bp.Partition
) -> tuple[BasePolytope, BasePolytope]:
    """Split a third-kind cell by x(A_I) <= 2 and >= 2; both halves are mid-polys."""
    I = frozenset(I)
    mid = mid_poly_halfspaces(cell, I, partition)
    other = frozenset(range(4)) - I
    mid_other = mid_poly_halfspaces(cell, other, partition)
    n = partition.n
    lo = _cell_from_halfspaces(4, n, mid)
    hi = _cell_from_halfspaces(4, n, mid_other)
    whole = _cell_from_halfspaces(4, n, cell.halfspaces(partition))
    AI = partition.mask(I)
    lo_direct = frozenset(b for b in whole.vertex_masks if (AI & b).bit_count() <= 2)
    hi_direct = frozenset(b for b in whole.vertex_masks if (AI & b).bit_count() >= 2)
    if lo.matroid.base_set != lo_direct or hi.matroid.base_set != hi_direct:
        raise NotABasePolytope(f"split of {cell} by I={sorted(I)} does not match the mid-poly form")
    return lo, hi


def all_splits(partition: bp.Partition) -> list[tuple[TildeCell, frozenset[int], BasePolytope, BasePolytope]]:
    """Two splits per third-kind cell (I and its complement give the same split)."""
    out = []
    for c in tilde_labels(4):
        if c.kind != "third":
            continue
        done = set()
        for I in valid_split_sets(c):
            key = frozenset({I, frozenset(range(4)) - I})
            if key in done:
                continue
            done.add(key)
            lo, hi = refine_third_kind(c, I, partition)
            out.append((c, I, lo, hi))
    return out


def refines(fine: Tiling, coarse: Tiling) -> list[int]:
    """Indices of cells of ``fine`` not contained in any cell of ``coarse`` (empty when it refines)."""
    return [
        j for j, c in enumerate(fine.cells)
        if not any(c.matroid.base_set <= d.matroid.base_set for d in coarse.cells)
    ]


# splits lemma


@dataclass
class ScanReport:
    matroids: int = 0
    skipped: int = 0
    pairs_checked: int = 0
    codim2_pairs: int = 0
    violations: list[tuple[Matroid, frozenset[int], frozenset[int]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "matroids": self.matroids,
            "skipped": self.skipped,
            "pairs_checked": self.pairs_checked,
            "codim2_pairs": self.codim2_pairs,
            "violations": [
                {"matroid": M.to_json(), "F": sorted(F), "L": sorted(L)} for M, F, L in self.violations
            ],
        }


def splits_lemma_scan(family: Iterable[Matroid]) -> ScanReport:
    """Rank-2 non-degenerate F, non-degenerate L with a loopless codim-2 meet: r(L) must not be 2."""
    rep = ScanReport()
    for M in family:
        rep.matroids += 1
        if M.k != 4 or mt.kappa(M) != 1:
            rep.skipped += 1
            continue
        nd = mt.nondegenerate_flat_masks(M)
        Fs = [f for f in nd if mt.rank_mask(M, f) == 2]
        if not Fs:
            rep.skipped += 1
            continue
        for f in Fs:
            for l in nd:
                if l == f:
                    continue
                rep.pairs_checked += 1
                if mt.codim2_face(M, f, l) is None:
                    continue
                rep.codim2_pairs += 1
                if mt.rank_mask(M, l) == 2:
                    rep.violations.append((M, ss.to_set(f), ss.to_set(l)))
    return rep


def _raw_tilde_cells(block_sizes: Sequence[int]) -> list[Matroid]:
    """Tilde and mid-poly cell matroids for arbitrary block sizes (size 1 allowed)."""
    blocks, start = [], 0
    for s in block_sizes:
        blocks.append(frozenset(range(start, start + s)))
        start += s
    n = start
    H = pt.hypersimplex(4, n)

    def union(I):
        return frozenset().union(*(blocks[j] for j in I))

    out = []
    for c in tilde_labels(4):
        hs = [pt.le(blocks[j], 1) for j in c.le] + [pt.ge(blocks[j], 1) for j in c.ge]
        pieces = [hs]
        if c.kind == "third":
            for I in valid_split_sets(c):
                (a,) = c.le - I
                (b,) = I - c.le
                pieces.append([pt.le(blocks[a], 1), pt.ge(blocks[b], 1), pt.le(union(I), 2)])
        for p in pieces:
            try:
                out.append(pt.intersect_halfspaces(H, p).matroid)
            except (EmptyResult, NotABasePolytope):
                pass
    return out


def lemma71_family(max_n: int = 7) -> list[Matroid]:
    """Rank-4 inseparable matroids with a rank-2 non-degenerate flat, deduplicated.

    Sources: single and double cuts of Delta(4, n) by x(F) <= rho for
    5 <= n <= max_n, and tilde/mid-poly cells for 4-block partitions of n.
    """
    seen: dict[tuple[int, frozenset[int]], Matroid | None] = {}

    def add(n: int, bases: Iterable[int]) -> None:
        key = (n, frozenset(bases))
        if not key[1] or key in seen:
            return
        seen[key] = None
        if not mt.is_base_collection(key[1]):
            return
        M = Matroid(n, 4, tuple(key[1]))
        if mt.kappa(M) == 1 and any(mt.rank_mask(M, f) == 2 for f in mt.nondegenerate_flat_masks(M)):
            seen[key] = M

    for n in range(5, max_n + 1):
        verts = list(ss.k_subsets(n, 4))
        cuts = []
        for f in range(1, ss.full(n)):
            for rho in range(1, min(4, f.bit_count())):
                cuts.append(frozenset(b for b in verts if (b & f).bit_count() <= rho))
        for c in cuts:
            add(n, c)
        for c1, c2 in combinations(cuts, 2):
            add(n, c1 & c2)
        for sizes in _block_sizes(n):
            for M in _raw_tilde_cells(sizes):
                add(n, M.bases)
    return sorted((M for M in seen.values() if M is not None), key=lambda M: (M.n, M.bases))


def _block_sizes(n: int) -> list[tuple[int, ...]]:
    out = []

    def rec(prefix, left, parts):
        if parts == 0:
            if left == 0:
                out.append(tuple(prefix))
            return
        lo = prefix[-1] if prefix else 1
        for s in range(lo, left + 1):
            rec(prefix + [s], left - s, parts - 1)

    rec([], n, 4)
    return out
