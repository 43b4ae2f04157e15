"""Combinatorics of polytropes: vertex expressions, bipartite trees, log map.

Nodes are 0-based. A vertex expression ``v = v_0^{C_0} ... v_{k-1}^{C_{k-1}}``
is stored as the tuple ``C``; its tree has the oriented edges ``(i, c)`` with
``c in C_i``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .errors import EdgeNotInTree, InvalidExpr, KMismatch, NotAFace, NotATree

Edge = tuple[int, int]


@dataclass(frozen=True)
class VertexExpr:
    k: int
    C: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "C", tuple(frozenset(c) for c in self.C))

    @classmethod
    def generator(cls, k: int, i: int) -> "VertexExpr":
        return cls(k, tuple(frozenset(range(k)) - {i} if j == i else frozenset() for j in range(k)))

    @classmethod
    def from_dict(cls, k: int, parts: dict[int, Iterable[int]]) -> "VertexExpr":
        return cls(k, tuple(frozenset(parts.get(i, ())) for i in range(k)))

    @property
    def I(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.C) if c)

    @property
    def cap(self) -> frozenset[int]:
        """Intersection of C_i over i in I."""
        sets = [c for c in self.C if c]
        return frozenset.intersection(*sets) if sets else frozenset()

    def to_json(self) -> dict:
        return {"k": self.k, "C": [sorted(c) for c in self.C]}

    @classmethod
    def from_json(cls, d: dict) -> "VertexExpr":
        return cls(int(d["k"]), tuple(frozenset(c) for c in d["C"]))

    def sort_key(self):
        return tuple(tuple(sorted(c)) for c in self.C)

    def __str__(self) -> str:
        parts = [f"v{i}^{{{','.join(map(str, sorted(c)))}}}" for i, c in enumerate(self.C) if c]
        return " ".join(parts)


class Check:
    """Truthy result of a validation carrying the first failure reason."""

    def __init__(self, ok: bool, reason: str = ""):
        self.ok, self.reason = ok, reason

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return "Check(ok)" if self.ok else f"Check(failed: {self.reason})"


def _is_spanning_tree(k: int, edges: Iterable[Edge]) -> bool:
    edges = list(edges)
    if len(edges) != k - 1:
        return False
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def validate_expr(e: VertexExpr) -> Check:
    k = e.k
    if k < 2:
        return Check(False, "k must be at least 2")
    if len(e.C) != k:
        return Check(False, f"expected {k} sets, got {len(e.C)}")
    for i, c in enumerate(e.C):
        if any(not 0 <= x < k for x in c):
            return Check(False, f"C_{i} has an index outside [k]")
        if i in c:
            return Check(False, f"C_{i} contains {i}")
    if sum(len(c) for c in e.C) != k - 1:
        return Check(False, "sizes of the C_i do not add up to k-1")
    I = e.I
    if not I or len(I) == k:
        return Check(False, "I(v) must be non-empty and proper")
    for i in I:
        for c in e.C[i]:
            if e.C[c]:
                return Check(False, f"edge ({i},{c}) ends at a node of I(v)")
    if frozenset().union(*(e.C[i] for i in I)) != frozenset(range(k)) - I:
        return Check(False, "the C_i do not cover the complement of I(v)")
    if not _is_spanning_tree(k, tree_edges(e)):
        return Check(False, "edges do not form a spanning tree")
    if len(I) >= 2 and len(e.cap) > 1:
        return Check(False, "the C_i share more than one element")
    return Check(True)


def _require(e: VertexExpr) -> None:
    chk = validate_expr(e)
    if not chk:
        raise InvalidExpr(chk.reason)


def tree_edges(e: VertexExpr) -> frozenset[Edge]:
    return frozenset((i, c) for i, C in enumerate(e.C) for c in C)


def monomial_of(e: VertexExpr) -> tuple[int, ...]:
    _require(e)
    return tuple(len(c) for c in e.C)


class VertexType(enum.Enum):
    GENERATOR = "Generator"
    TYPE0 = "Type0"
    TYPE1 = "Type1"


def vertex_type(e: VertexExpr) -> VertexType:
    _require(e)
    if len(e.I) == 1:
        return VertexType.GENERATOR
    return VertexType.TYPE1 if e.cap else VertexType.TYPE0


def d_sets(e: VertexExpr) -> dict[int, frozenset[int]]:
    """D_i = [k] - (C_i + {i}) for i in I."""
    _require(e)
    ground = frozenset(range(e.k))
    return {i: ground - e.C[i] - {i} for i in sorted(e.I)}


def d_star(e: VertexExpr) -> dict[int, frozenset[int]]:
    """D*_i = (C_i - cap) + {i} for i in I; these partition [k] - cap."""
    _require(e)
    cap = e.cap
    return {i: (e.C[i] - cap) | {i} for i in sorted(e.I)}


@dataclass(frozen=True)
class BipartiteForest:
    """Oriented edges (i, c) with i on the I side; isolated nodes allowed."""

    k: int
    edges: frozenset[Edge]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(tuple(x) for x in self.edges))
        heads = {i for i, _ in self.edges}
        tails = {c for _, c in self.edges}
        if heads & tails:
            raise NotATree(f"nodes {sorted(heads & tails)} are on both sides")
        for i, c in self.edges:
            if not (0 <= i < self.k and 0 <= c < self.k) or i == c:
                raise NotATree(f"bad edge ({i},{c})")
        if not _is_forest(self.k, self.edges):
            raise NotATree("edges contain a cycle")

    @property
    def I(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.edges)

    @cached_property
    def components(self) -> tuple[frozenset[int], ...]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.k)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen: set[int] = set()
        out = []
        for v in range(self.k):
            if v in seen:
                continue
            comp, stack = {v}, [v]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return tuple(out)

    def is_tree(self) -> bool:
        return len(self.edges) == self.k - 1

    def remove(self, edge: Edge) -> "BipartiteForest":
        if edge not in self.edges:
            raise EdgeNotInTree(f"{edge} is not an edge")
        return BipartiteForest(self.k, self.edges - {edge})

    def side_of(self, edge: Edge) -> frozenset[int]:
        """Nodes of the component of (forest - edge) containing the I-side endpoint."""
        sub = self.remove(edge)
        return next(c for c in sub.components if edge[0] in c)

    def to_json(self) -> dict:
        iso = sorted(v for c in self.components if len(c) == 1 for v in c)
        return {"edges": sorted([list(e) for e in self.edges]), "isolated": iso}


def _is_forest(k: int, edges) -> bool:
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def tree_of(e: VertexExpr) -> BipartiteForest:
    _require(e)
    return BipartiteForest(e.k, tree_edges(e))


def expr_of_tree(t: BipartiteForest) -> VertexExpr:
    if not t.is_tree():
        raise NotATree("not spanning: expected k-1 edges")
    C = [set() for _ in range(t.k)]
    for i, c in t.edges:
        C[i].add(c)
    e = VertexExpr(t.k, tuple(C))
    chk = validate_expr(e)
    if not chk:
        raise NotATree(chk.reason)
    return e


@dataclass(frozen=True)
class Adjacency:
    removed: tuple[Edge, Edge]
    forest: BipartiteForest


def adjacent(e1: VertexExpr, e2: VertexExpr) -> Adjacency | None:
    """Common forest when each tree loses one edge to reach it, else None."""
    if e1.k != e2.k:
        raise KMismatch(f"k={e1.k} vs k={e2.k}")
    t1, t2 = tree_edges(e1), tree_edges(e2)
    only1, only2 = t1 - t2, t2 - t1
    if len(only1) != 1 or len(only2) != 1:
        return None
    f1, f2 = next(iter(only1)), next(iter(only2))
    return Adjacency((f1, f2), BipartiteForest(e1.k, t1 & t2))


def log_map(e: VertexExpr, edge: Edge) -> frozenset[int]:
    """Direction set at v of the polytrope edge obtained by removing ``edge``."""
    t = tree_of(e)
    if tuple(edge) not in t.edges:
        raise EdgeNotInTree(f"{tuple(edge)} is not an edge of the tree of {e}")
    return t.side_of(tuple(edge))


@dataclass(frozen=True)
class FaceExpr:
    k: int
    C: tuple[frozenset[int], ...]

    @property
    def dim(self) -> int:
        return self.k - 1 - sum(len(c) for c in self.C)

    def to_json(self) -> dict:
        return {"k": self.k, "C": [sorted(c) for c in self.C], "dim": self.dim}


@dataclass(frozen=True)
class PolytropeEdge:
    a: int
    b: int
    removed: tuple[Edge, Edge]
    log_a: frozenset[int]
    log_b: frozenset[int]


@dataclass(frozen=True)
class PolytropeType:
    k: int
    vertices: tuple[VertexExpr, ...]
    edges: tuple[PolytropeEdge, ...]
    points: tuple | None = None  # realized coordinates, aligned with vertices

    @property
    def max_vertices(self) -> int:
        return comb(2 * self.k - 2, self.k - 1)

    def is_maximal(self) -> bool:
        return len(self.vertices) == self.max_vertices

    def degree(self, idx: int) -> int:
        return sum(idx in (e.a, e.b) for e in self.edges)

    def neighbours(self, idx: int) -> list[int]:
        return sorted([e.b for e in self.edges if e.a == idx] + [e.a for e in self.edges if e.b == idx])

    def to_json(self) -> dict:
        d = {
            "k": self.k,
            "vertices": [v.to_json()["C"] for v in self.vertices],
            "edges": [[e.a, e.b, sorted(e.log_a), sorted(e.log_b)] for e in self.edges],
        }
        if self.points is not None:
            d["points"] = [[str(t) for t in p] for p in self.points]
        return d


def polytrope_type_from_json(d: dict) -> PolytropeType:
    """Rebuild a type from its JSON; edges are recomputed and must match when given."""
    k = int(d["k"])
    verts = [VertexExpr(k, tuple(frozenset(c) for c in C)) for C in d["vertices"]]
    pts = [tuple(Fraction(t) for t in p) for p in d["points"]] if d.get("points") else None
    T = polytrope_type(verts, pts)
    if "edges" in d:
        given = {(min(a, b), max(a, b)) for a, b, *_ in d["edges"]}
        if given != {(e.a, e.b) for e in T.edges}:
            raise InvalidExpr("edge list does not match the vertex expressions")
    return T


def polytrope_type(vertices: Sequence[VertexExpr], points=None) -> PolytropeType:
    """Assemble a type from vertex expressions; edges come from :func:`adjacent`."""
    if not vertices:
        raise InvalidExpr("no vertices")
    k = vertices[0].k
    order = sorted(range(len(vertices)), key=lambda j: vertices[j].sort_key())
    verts = tuple(vertices[j] for j in order)
    pts = tuple(points[j] for j in order) if points is not None else None
    for v in verts:
        if v.k != k:
            raise KMismatch("mixed k")
        _require(v)
    edges = []
    for a, b in combinations(range(len(verts)), 2):
        adj = adjacent(verts[a], verts[b])
        if adj is None:
            continue
        f1, f2 = adj.removed
        edges.append(PolytropeEdge(a, b, adj.removed, log_map(verts[a], f1), log_map(verts[b], f2)))
    return PolytropeType(k, verts, tuple(edges), pts)


def face_expr(vertices: Sequence[VertexExpr]) -> FaceExpr:
    """Componentwise intersection of the C_i over a face's vertices."""
    if not vertices:
        raise NotAFace("empty vertex list")
    k = vertices[0].k
    if any(v.k != k for v in vertices):
        raise KMismatch("mixed k")
    C = tuple(frozenset.intersection(*(v.C[i] for v in vertices)) for i in range(k))
    fe = FaceExpr(k, C)
    if len(vertices) > 1:
        if len(vertices) < fe.dim + 1:
            raise NotAFace("too few vertices for the face dimension")
        # vertices must be connected through adjacencies inside the face
        vs = list(vertices)
        seen, stack = {0}, [0]
        while stack:
            a = stack.pop()
            for b in range(len(vs)):
                if b not in seen and adjacent(vs[a], vs[b]) is not None:
                    seen.add(b)
                    stack.append(b)
        if len(seen) != len(vs):
            raise NotAFace("vertices are not connected by edges")
    return fe


def face_vertices(T: PolytropeType, forest: BipartiteForest) -> list[int]:
    return [j for j, v in enumerate(T.vertices) if forest.edges <= tree_edges(v)]


def faces_of(T: PolytropeType, dim: int) -> list[tuple[FaceExpr, tuple[int, ...]]]:
    """Faces of dimension ``dim`` as (expression, vertex indices), from removing ``dim`` tree edges."""
    if not 0 <= dim <= T.k - 1:
        return []
    seen: dict[frozenset[Edge], tuple[int, ...]] = {}
    for v in T.vertices:
        te = sorted(tree_edges(v))
        for drop in combinations(te, dim):
            kept = frozenset(te) - set(drop)
            if kept not in seen:
                seen[kept] = tuple(face_vertices(T, BipartiteForest(T.k, kept)))
    out = []
    for kept, idx in seen.items():
        C = [set() for _ in range(T.k)]
        for i, c in kept:
            C[i].add(c)
        out.append((FaceExpr(T.k, tuple(frozenset(c) for c in C)), idx))
    out.sort(key=lambda p: p[1])
    return out


@dataclass(frozen=True)
class Type0Violation:
    v: int
    w: int
    reason: str


def type0_neighbor_check(T: PolytropeType) -> list[Type0Violation]:
    """Edges vw of non-generators with 1 < |Lambda^v| < k-1, |I(v)| >= 3 and v of type 1 need w of type 0."""
    if T.k < 5:
        return []
    out = []
    for e in T.edges:
        for a, b, lam in ((e.a, e.b, e.log_a), (e.b, e.a, e.log_b)):
            v, w = T.vertices[a], T.vertices[b]
            if len(v.I) == 1 or len(w.I) == 1:
                continue
            if not 1 < len(lam) < T.k - 1 or len(v.I) < 3:
                continue
            if vertex_type(v) is VertexType.TYPE1 and vertex_type(w) is not VertexType.TYPE0:
                out.append(Type0Violation(a, b, f"{v} is type 1 but neighbour {w} is not type 0"))
    return out


def _spanning_trees_bipartite(I: Sequence[int], J: Sequence[int]):
    """All spanning trees of the complete bipartite graph K_{I,J}, as oriented edge sets."""
    all_edges = [(i, c) for i in I for c in J]
    need = len(I) + len(J) - 1
    nodes = sorted(set(I) | set(J))
    pos = {v: t for t, v in enumerate(nodes)}
    for combo in combinations(all_edges, need):
        if _is_spanning_tree(len(nodes), [(pos[a], pos[b]) for a, b in combo]):
            yield frozenset(combo)


def candidate_exprs(k: int) -> list[VertexExpr]:
    """Every expression passing :func:`validate_expr` (over-counts a single polytrope)."""
    out = []
    for r in range(1, k):
        for I in combinations(range(k), r):
            J = [c for c in range(k) if c not in I]
            for edges in _spanning_trees_bipartite(I, J):
                C = [set() for _ in range(k)]
                for i, c in edges:
                    C[i].add(c)
                e = VertexExpr(k, tuple(C))
                if validate_expr(e):
                    out.append(e)
    out.sort(key=VertexExpr.sort_key)
    return out


def degree_monomials(k: int) -> set[tuple[int, ...]]:
    """All exponent vectors of total degree k-1 in k variables."""
    return {m for m in product(range(k), repeat=k) if sum(m) == k - 1}
