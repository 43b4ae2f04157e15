"""Base polytopes inside hypersimplices: H-descriptions, cuts, faces, quotients.

Everything is exact. Vertices of a base polytope are the indicator vectors of
its bases; faces are recognised by tight-set closure against the complete
H-description (equations per connected component, ``x_i >= 0``, and
``x(F) <= r(F)`` for every minimal non-degenerate flat).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Literal, Sequence

from . import linalg
from . import matroid as mt
from . import subsets as ss
from .errors import (
    AmbientMismatch,
    EmptyResult,
    LemmaViolation,
    LoopyMatroid,
    NotABasePolytope,
    NotAFace,
    NotASubset,
    NotCommonCell,
    PreconditionViolated,
    RankOutOfRange,
)
from .matroid import Matroid

Sense = Literal["le", "ge"]


@dataclass(frozen=True)
class HalfSpace:
    """``x(support) <= bound`` (sense "le") or ``>= bound`` (sense "ge")."""

    support: frozenset[int]
    bound: int
    sense: Sense = "le"

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))
        if not self.support:
            raise ValueError("half-space support must be non-empty")
        if self.sense not in ("le", "ge"):
            raise ValueError(f"sense must be 'le' or 'ge', got {self.sense!r}")

    @cached_property
    def mask(self) -> int:
        return ss.to_mask(self.support)

    def holds(self, value) -> bool:
        return value <= self.bound if self.sense == "le" else value >= self.bound

    def flipped(self, n: int, k: int) -> "HalfSpace":
        """Same half-space of the hyperplane x([n]) = k written on the complement."""
        comp = frozenset(range(n)) - self.support
        return HalfSpace(comp, k - self.bound, "ge" if self.sense == "le" else "le")

    def to_json(self) -> dict:
        return {"support": sorted(self.support), "bound": self.bound, "sense": self.sense}


def le(support: Iterable[int], bound: int) -> HalfSpace:
    return HalfSpace(frozenset(support), bound, "le")


def ge(support: Iterable[int], bound: int) -> HalfSpace:
    return HalfSpace(frozenset(support), bound, "ge")


@dataclass(frozen=True)
class HRep:
    n: int
    equations: tuple[tuple[frozenset[int], int], ...]
    inequalities: tuple[HalfSpace, ...]

    @cached_property
    def _compiled(self):
        eqs = [(ss.to_mask(A), b) for A, b in self.equations]
        ineqs = [(h.mask, h.bound, h.sense == "le") for h in self.inequalities]
        return eqs, ineqs

    def contains_mask(self, b: int) -> bool:
        """Whether the 0/1 point 1^b satisfies every constraint."""
        eqs, ineqs = self._compiled
        for a, r in eqs:
            if (a & b).bit_count() != r:
                return False
        for a, r, is_le in ineqs:
            v = (a & b).bit_count()
            if (v > r) if is_le else (v < r):
                return False
        return True

    def contains(self, x: Sequence) -> bool:
        """Exact membership of a rational point."""
        return self.contains_scaled([Fraction(t) for t in x], 1)

    def contains_scaled(self, numer: Sequence, denom) -> bool:
        """Membership of the point numer/denom (denom > 0) without division."""
        eqs, ineqs = self._compiled
        for a, r in eqs:
            if sum(numer[i] for i in ss.members(a)) != r * denom:
                return False
        for a, r, is_le in ineqs:
            v = sum(numer[i] for i in ss.members(a))
            if (v > r * denom) if is_le else (v < r * denom):
                return False
        return True

    def tight_indices(self, b: int) -> frozenset[int]:
        _, ineqs = self._compiled
        return frozenset(j for j, (a, r, _) in enumerate(ineqs) if (a & b).bit_count() == r)

    def zero_one_solutions(self) -> list[int]:
        return [b for b in ss.all_subsets(self.n) if self.contains_mask(b)]

    def to_json(self) -> dict:
        return {
            "equations": [{"support": sorted(A), "value": b} for A, b in self.equations],
            "inequalities": [h.to_json() for h in self.inequalities],
        }


def h_representation(M: Matroid) -> HRep:
    """Complete H-description of BP_M for a loopless matroid."""
    if not mt.is_loopless(M):
        raise LoopyMatroid(f"matroid has loops {sorted(mt.loops(M))}")
    eqs = tuple((ss.to_set(c), mt.rank_mask(M, c)) for c in mt.component_masks(M))
    ineqs = [HalfSpace(frozenset({i}), 0, "ge") for i in range(M.n)]
    ineqs += [HalfSpace(ss.to_set(f), mt.rank_mask(M, f), "le") for f in mt.minimal_nondegenerate_flat_masks(M)]
    return HRep(M.n, eqs, tuple(ineqs))


@dataclass(frozen=True)
class BasePolytope:
    matroid: Matroid

    @property
    def n(self) -> int:
        return self.matroid.n

    @property
    def k(self) -> int:
        return self.matroid.k

    @property
    def vertex_masks(self) -> tuple[int, ...]:
        return self.matroid.bases

    @property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(ss.indicator(b, self.n) for b in self.matroid.bases)

    @cached_property
    def hrep(self) -> HRep:
        return h_representation(self.matroid)

    @property
    def dim(self) -> int:
        return self.n - mt.kappa(self.matroid)

    def __len__(self) -> int:
        return len(self.matroid.bases)

    def to_json(self) -> dict:
        h = self.hrep.to_json()
        return {"n": self.n, "rank": self.k, "vertices": [list(v) for v in self.vertices], **h}


def hypersimplex(k: int, n: int) -> BasePolytope:
    if not 0 < k < n:
        raise RankOutOfRange(f"hypersimplex needs 0 < k < n, got k={k}, n={n}")
    return BasePolytope(mt.uniform(k, n))


def dimension_by_rank(P: BasePolytope) -> int:
    """dim BP_M from the rational rank of vertex differences (independent of kappa)."""
    return linalg.affine_rank(P.vertices)


def _filter(P: BasePolytope, hs: Sequence[HalfSpace]) -> list[int]:
    out = []
    for b in P.vertex_masks:
        if all(h.holds((b & h.mask).bit_count()) for h in hs):
            out.append(b)
    return out


def _cut_uniform(k: int, n: int, f: int, rho: int) -> Matroid:
    # truncate(U(n-|F|, F^c) + U(rho, F), k)
    comp = ss.full(n) & ~f
    parts = [(mt.uniform(rho, f.bit_count()), ss.members(f))]
    if comp:
        parts.append((mt.uniform(comp.bit_count(), comp.bit_count()), ss.members(comp)))
    N = mt.embed_direct_sum(n, parts)
    return mt.truncate(N, k)


def cut(P: BasePolytope, h: HalfSpace) -> BasePolytope:
    """P & {x(F) <= rho} through the cutting lemmas.

    P must be a hypersimplex, or loopless with uniform simplification and F a
    union of parallel classes. The result is checked against direct vertex
    filtering and for base exchange; a mismatch raises LemmaViolation.
    """
    if h.sense != "le":
        raise PreconditionViolated("cut expects a '<=' half-space; flip it with HalfSpace.flipped")
    M = P.matroid
    n, k = M.n, M.k
    f = ss.to_mask(h.support, n)
    if f == ss.full(n):
        raise PreconditionViolated("support must be a proper subset")
    rho = h.bound
    if rho < 0:
        raise EmptyResult("negative bound")
    expected = _filter(P, [h])
    if not expected:
        raise EmptyResult(f"no vertex satisfies x({sorted(h.support)}) <= {rho}")
    if len(M.bases) == len(list(ss.k_subsets(n, k))):
        if rho >= min(k, f.bit_count()):
            result = M
        else:
            result = _cut_uniform(k, n, f, rho)
    else:
        if not mt.is_loopless(M):
            raise PreconditionViolated("matroid has loops")
        simple, g = mt.simplify(M)
        if len(simple.bases) != len(list(ss.k_subsets(simple.n, simple.k))):
            raise PreconditionViolated("simplification is not uniform")
        if g.preimage(g.apply(f)) != f:
            raise PreconditionViolated("support splits a parallel class")
        gf = g.apply(f)
        lam = gf.bit_count()
        if rho >= min(k, lam):
            result = M
        else:
            result = mt.pullback(g, _cut_uniform(simple.k, simple.n, gf, rho))
    if set(result.bases) != set(expected):
        raise LemmaViolation(f"cut by x({sorted(h.support)}) <= {rho}: lemma matroid differs from the filtered vertices")
    mt._check_exchange(result.base_set)
    return BasePolytope(result)


def intersect_halfspaces(P: BasePolytope, hs: Iterable[HalfSpace]) -> BasePolytope:
    """Vertices of P satisfying every half-space, checked to form a base polytope.

    Only 0/1 points are kept, so this equals the geometric intersection
    exactly when the result is a base polytope whose H-description is implied;
    the exchange check guards the first part.
    """
    hs = list(hs)
    kept = _filter(P, hs)
    if not kept:
        raise EmptyResult("half-spaces cut away every vertex")
    try:
        M = mt.make_matroid(P.n, kept)
    except mt.ExchangeViolation as exc:
        raise NotABasePolytope(str(exc)) from exc
    return BasePolytope(M)


def _as_masks(P: BasePolytope, W: Iterable) -> frozenset[int]:
    out = set()
    for w in W:
        if isinstance(w, int):
            out.add(w)
        else:
            if len(w) != P.n:
                raise NotASubset(f"point {tuple(w)} has the wrong length")
            out.add(ss.from_indicator(w))
    return frozenset(out)


def face_closure_masks(P: BasePolytope, W: frozenset[int]) -> frozenset[int]:
    """Smallest face of P containing the vertex set W (tight-set closure)."""
    hrep = P.hrep
    _, ineqs = hrep._compiled
    tight = None
    for w in W:
        t = hrep.tight_indices(w)
        tight = t if tight is None else tight & t
    if tight is None:
        return frozenset()
    sel = [ineqs[j] for j in tight]
    return frozenset(b for b in P.vertex_masks if all((a & b).bit_count() == r for a, r, _ in sel))


def face_test(P: BasePolytope, W: Iterable) -> bool:
    """True iff the non-empty vertex set W is exactly the vertex set of a face of P."""
    w = _as_masks(P, W)
    if not w <= P.matroid.base_set:
        raise NotASubset("W contains points that are not vertices of P")
    if not w:
        return False
    return face_closure_masks(P, w) == w


def is_face_fitting(P1: BasePolytope, P2: BasePolytope) -> tuple[bool, Matroid | None]:
    """Whether P1 & P2 is a common face; also returns that face's matroid."""
    if (P1.n, P1.k) != (P2.n, P2.k):
        raise AmbientMismatch(f"({P1.n},{P1.k}) vs ({P2.n},{P2.k})")
    common = P1.matroid.base_set & P2.matroid.base_set
    if not common:
        return True, None
    ok = face_closure_masks(P1, common) == common and face_closure_masks(P2, common) == common
    return ok, (Matroid(P1.n, P1.k, tuple(common)) if ok else None)


def involution_dual(P: BasePolytope) -> BasePolytope:
    """Image of P under x -> 1 - x, which is the base polytope of the dual matroid."""
    return BasePolytope(mt.dual(P.matroid))


def involution_point(x: Sequence) -> tuple:
    return tuple(1 - t for t in x)


@dataclass(frozen=True)
class Tiling:
    """Cells (base polytopes) in the hypersimplex Delta(k, n)."""

    k: int
    n: int
    cells: tuple[BasePolytope, ...]
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        for c in self.cells:
            if (c.n, c.k) != (self.n, self.k):
                raise AmbientMismatch(f"cell in Delta({c.k},{c.n}) inside a Delta({self.k},{self.n}) tiling")

    def __len__(self) -> int:
        return len(self.cells)

    def without(self, idx: int) -> "Tiling":
        labels = self.labels[:idx] + self.labels[idx + 1:] if self.labels else ()
        return Tiling(self.k, self.n, self.cells[:idx] + self.cells[idx + 1:], labels)

    def dual(self) -> "Tiling":
        return Tiling(self.n - self.k, self.n, tuple(involution_dual(c) for c in self.cells), self.labels)

    def common_bases(self) -> frozenset[int]:
        out = None
        for c in self.cells:
            out = c.matroid.base_set if out is None else out & c.matroid.base_set
        return out or frozenset()


class QuotientMap:
    """x -> (x - p) modulo Aff_0(Q), in deterministic coordinates.

    The span of Q - p is row-reduced with left-to-right pivots; a vector is
    reduced against those rows and its non-pivot coordinates are kept.
    """

    def __init__(self, Q_points: Sequence[Sequence]):
        pts = sorted({tuple(Fraction(t) for t in q) for q in Q_points})
        if not pts:
            raise NotAFace("empty face")
        self.p = pts[0]
        self.n = len(self.p)
        rows, self.pivots = linalg.rref([[a - b for a, b in zip(q, self.p)] for q in pts[1:]])
        self.rows = rows
        self.free = [c for c in range(self.n) if c not in self.pivots]

    @property
    def kernel_dim(self) -> int:
        return len(self.pivots)

    def __call__(self, x: Sequence) -> tuple[Fraction, ...]:
        y = [Fraction(a) - b for a, b in zip(x, self.p)]
        for row, c in zip(self.rows, self.pivots):
            if y[c]:
                f = y[c]
                y = [a - f * b for a, b in zip(y, row)]
        return tuple(y[c] for c in self.free)


@dataclass(frozen=True)
class QuotientPolytope:
    """Exact image polytope; faces are sets of indices into ``points``."""

    points: tuple[tuple[Fraction, ...], ...]
    dim: int
    vertices: tuple[int, ...]
    facets: tuple[frozenset[int], ...]
    base_point: int | None = None  # index of the image of the face modded out

    @cached_property
    def face_lattice(self) -> list[frozenset[int]]:
        """All non-empty faces as vertex-index sets, ordered by dimension."""
        verts = frozenset(self.vertices)
        faces = {verts}
        frontier = [verts & f for f in self.facets]
        while frontier:
            nxt = []
            for F in frontier:
                if F and F not in faces:
                    faces.add(F)
                    nxt.extend(F & (verts & g) for g in self.facets)
            frontier = nxt
        return sorted(faces, key=lambda F: (self.face_dim(F), sorted(F)))

    def face_dim(self, F: Iterable[int]) -> int:
        return linalg.affine_rank([self.points[i] for i in F])

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dim + 1)
        for F in self.face_lattice:
            counts[self.face_dim(F)] += 1
        return counts


def hull_polytope(points: Sequence[Sequence]) -> QuotientPolytope:
    """Facets and vertices of conv(points) by brute-force hyperplane enumeration.

    Only meant for small point sets (quotients at desk scale).
    """
    pts = sorted({tuple(Fraction(t) for t in p) for p in points})
    d = linalg.affine_rank(pts)
    if d <= 0:
        return QuotientPolytope(tuple(pts), max(d, 0), tuple(range(len(pts))), ())
    p0 = pts[0]
    _, piv = linalg.rref([[a - b for a, b in zip(p, p0)] for p in pts[1:]])
    loc = [tuple(p[c] for c in piv) for p in pts]
    facets: dict[frozenset[int], list[Fraction]] = {}
    for combo in combinations(range(len(loc)), d):
        normal = linalg.nullspace_vector([list(loc[i]) + [Fraction(1)] for i in combo])
        if normal is None:
            continue
        vals = [sum(a * b for a, b in zip(normal[:-1], q)) + normal[-1] for q in loc]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            on = frozenset(i for i, v in enumerate(vals) if v == 0)
            if linalg.affine_rank([loc[i] for i in on]) == d - 1:
                facets.setdefault(on, normal[:-1])
    verts = []
    for i in range(len(loc)):
        normals = [nv for F, nv in facets.items() if i in F]
        if normals and linalg.rank(normals) == d:
            verts.append(i)
    return QuotientPolytope(tuple(pts), d, tuple(verts), tuple(sorted(facets, key=sorted)))


def _vertex_points(P) -> list[tuple[int, ...]]:
    if isinstance(P, BasePolytope):
        return list(P.vertices)
    return [tuple(v) for v in P]


def quotient(P, Q, qmap: QuotientMap | None = None) -> QuotientPolytope:
    """Quotient polytope of P modulo its face Q.

    P and Q are base polytopes or explicit vertex lists. When P is a base
    polytope, Q is required to pass :func:`face_test`.
    """
    Pv = _vertex_points(P)
    Qv = _vertex_points(Q)
    if not set(Qv) <= set(Pv):
        raise NotAFace("Q is not contained in P")
    if isinstance(P, BasePolytope) and not face_test(P, Qv):
        raise NotAFace("Q is not a face of P")
    qmap = qmap or QuotientMap(Qv)
    base_img = qmap(Qv[0])
    hull = hull_polytope([qmap(v) for v in Pv])
    bp = hull.points.index(base_img)
    return QuotientPolytope(hull.points, hull.dim, hull.vertices, hull.facets, bp)


def quotient_tiling(T: Tiling, Q) -> list[QuotientPolytope]:
    """Quotients of every cell of T modulo a common cell Q, with one shared map."""
    Qv = _vertex_points(Q)
    qset = frozenset(ss.from_indicator(v) for v in Qv)
    for c in T.cells:
        if not qset <= c.matroid.base_set or face_closure_masks(c, qset) != qset:
            raise NotCommonCell("Q is not a face of every cell")
    qmap = QuotientMap(Qv)
    return [quotient(c, Qv, qmap) for c in T.cells]


def quotient_support(T: Tiling, Q) -> QuotientPolytope:
    """Image of the whole hypersimplex under the quotient map of a common cell Q."""
    qmap = QuotientMap(_vertex_points(Q))
    return hull_polytope([qmap(ss.indicator(b, T.n)) for b in ss.k_subsets(T.n, T.k)])
