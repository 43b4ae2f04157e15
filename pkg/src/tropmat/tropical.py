"""Min-plus numerics over exact rationals: hulls, vertex realization, types.

Row i of a matrix V is the generator v_i. Points live in R^k / R(1,...,1)
and are canonicalized with coordinate 0 set to zero.
"""
from __future__ import annotations

import csv
import json
import random
from fractions import Fraction
from itertools import permutations
from math import comb
from pathlib import Path
from typing import Sequence

from . import biconvex as bc
from .biconvex import PolytropeType, VertexExpr
from .errors import (
    InconsistentSystem,
    InputError,
    NonGeneric,
    NonGenericTie,
    NotAVertex,
    NotBiconvex,
    Singular,
)

Matrix = tuple[tuple[Fraction, ...], ...]
Point = tuple[Fraction, ...]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    """Square matrix of Fractions; entries may be ints, Fractions or "p/q" strings."""
    try:
        M = tuple(tuple(Fraction(str(x).strip()) if isinstance(x, str) else Fraction(x) for x in r) for r in rows)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad matrix entry: {exc}") from exc
    k = len(M)
    if k < 2 or any(len(r) != k for r in M):
        raise InputError("matrix must be square with k >= 2")
    return M


def read_matrix(path: str | Path) -> Matrix:
    """Read a k x k matrix from JSON (list of rows) or CSV."""
    text = Path(path).read_text()
    if text.lstrip().startswith("["):
        rows = json.loads(text)
    else:
        rows = [r for r in csv.reader(text.splitlines()) if r and any(x.strip() for x in r)]
    return as_matrix(rows)


def matrix_to_json(V: Matrix) -> list[list[str]]:
    return [[str(x) for x in r] for r in V]


def trop_det(V: Sequence[Sequence]) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Min-plus determinant and every permutation attaining it."""
    V = as_matrix(V)
    k = len(V)
    best, arg = None, []
    for s in permutations(range(k)):
        val = sum(V[i][s[i]] for i in range(k))
        if best is None or val < best:
            best, arg = val, [s]
        elif val == best:
            arg.append(s)
    return best, arg


def is_trop_nonsingular(V) -> bool:
    return len(trop_det(V)[1]) == 1


def canonical(x: Sequence) -> Point:
    x = [Fraction(t) for t in x]
    return tuple(t - x[0] for t in x)


def _project(V: Matrix, x: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    k = len(V)
    lam = [max(x[j] - V[i][j] for j in range(k)) for i in range(k)]
    proj = [min(lam[i] + V[i][j] for i in range(k)) for j in range(k)]
    return lam, proj


def tconv_member(V, x: Sequence) -> bool:
    """Whether x lies in the min-plus convex hull of the rows of V (mod 1)."""
    V = as_matrix(V)
    x = [Fraction(t) for t in x]
    if len(x) != len(V):
        raise InputError("point has the wrong length")
    _, proj = _project(V, x)
    d = proj[0] - x[0]
    return all(p - t == d for p, t in zip(proj, x))


def realize_vertex(V, e: VertexExpr) -> Point:
    """Solve x_c - x_i = v_ic - v_ii over the tree of e."""
    V = as_matrix(V)
    t = bc.tree_of(e)
    if t.k != len(V):
        raise InputError("expression and matrix disagree on k")
    adj: dict[int, list[tuple[int, Fraction]]] = {v: [] for v in range(t.k)}
    for i, c in t.edges:
        d = V[i][c] - V[i][i]
        adj[i].append((c, d))
        adj[c].append((i, -d))
    x: dict[int, Fraction] = {0: Fraction(0)}
    stack = [0]
    while stack:
        a = stack.pop()
        for b, d in adj[a]:
            if b in x:
                if x[b] != x[a] + d:
                    raise InconsistentSystem(f"conflicting constraint on edge {a}-{b}")
            else:
                x[b] = x[a] + d
                stack.append(b)
    if len(x) != t.k:
        raise InconsistentSystem("tree did not reach every node")
    return canonical([x[j] for j in range(t.k)])


def expression_of_point(V, x: Sequence) -> VertexExpr:
    """Read the vertex expression of x from the argmax sets of x - v_i."""
    V = as_matrix(V)
    k = len(V)
    x = [Fraction(t) for t in x]
    T = []
    for i in range(k):
        diffs = [x[j] - V[i][j] for j in range(k)]
        m = max(diffs)
        T.append(frozenset(j for j in range(k) if diffs[j] == m))
    if sum(len(t) for t in T) > 2 * k - 1:
        raise NonGenericTie(f"argmax sets too large: {[sorted(t) for t in T]}")
    C = tuple(T[i] - {i} if i in T[i] and len(T[i]) >= 2 else frozenset() for i in range(k))
    e = VertexExpr(k, C)
    chk = bc.validate_expr(e)
    if not chk:
        raise NotAVertex(f"point {tuple(map(str, x))} gives no valid expression: {chk.reason}")
    return e


def cone_condition(V) -> tuple[Point, list[str]]:
    """Base point v_0 and the failures of v_i in int(E_i + v_0).

    Rows are shifted so v_ii = 0, v_0 is their coordinatewise minimum, and the
    check is (v_i - v_0)_j > (v_i - v_0)_i for every j != i.
    """
    V = as_matrix(V)
    k = len(V)
    R = [[V[i][j] - V[i][i] for j in range(k)] for i in range(k)]
    v0 = tuple(min(R[i][j] for i in range(k)) for j in range(k))
    bad = []
    for i in range(k):
        for j in range(k):
            if j != i and not R[i][j] - R[i][i] > v0[j] - v0[i]:
                bad.append(f"v_{i} fails at coordinate {j}")
    return v0, bad


def check_cone_condition(V) -> bool:
    return not cone_condition(V)[1]


_CANDIDATES: dict[int, list[VertexExpr]] = {}


def _candidates(k: int) -> list[VertexExpr]:
    if k not in _CANDIDATES:
        _CANDIDATES[k] = bc.candidate_exprs(k)
    return _CANDIDATES[k]


def realize_type(V, require_maximal: bool = False) -> PolytropeType:
    """Numerically realized combinatorial type of tconv(rows of V)."""
    V = as_matrix(V)
    k = len(V)
    if not is_trop_nonsingular(V):
        raise Singular("tropical determinant is attained more than once")
    _, bad = cone_condition(V)
    if bad:
        raise NotBiconvex("; ".join(bad))
    verts, pts = [], []
    seen = set()
    for e in _candidates(k):
        x = realize_vertex(V, e)
        if not tconv_member(V, x):
            continue
        try:
            back = expression_of_point(V, x)
        except NotAVertex:
            continue
        if back != e:
            continue
        if x in seen:
            raise NonGeneric(f"two expressions realize the point {tuple(map(str, x))}")
        seen.add(x)
        verts.append(e)
        pts.append(x)
    T = bc.polytrope_type(verts, pts)
    if require_maximal and not T.is_maximal():
        raise NonGeneric(f"{len(verts)} vertices, expected {comb(2 * k - 2, k - 1)}")
    return T


def edge_direction_errors(V, T: PolytropeType) -> list[str]:
    """Edges whose vector w - v is not a positive multiple of 1^{Lambda^v} mod 1."""
    if T.points is None:
        raise InputError("type carries no points")
    out = []
    for e in T.edges:
        for a, b, lam in ((e.a, e.b, e.log_a), (e.b, e.a, e.log_b)):
            d = [q - p for p, q in zip(T.points[a], T.points[b])]
            # mod 1: shift so coordinates outside lam are zero
            outside = [d[j] for j in range(T.k) if j not in lam]
            if not outside or any(t != outside[0] for t in outside):
                out.append(f"edge {a}-{b}: not constant off {sorted(lam)}")
                continue
            inside = [d[j] - outside[0] for j in lam]
            if any(t != inside[0] for t in inside) or inside[0] <= 0:
                out.append(f"edge {a}-{b}: not a positive multiple on {sorted(lam)}")
    return out


def random_generic_matrix(k: int, seed: int, lo: int = 10, hi: int = 19, denom: int = 997) -> Matrix:
    """Zero diagonal, rational off-diagonal entries in [lo, hi] with hi < 2 lo.

    The strict triangle inequality this forces makes the rows a polytrope's
    generators satisfying the cone condition; random denominators make ties
    unlikely, and callers check genericity anyway.
    """
    if not hi < 2 * lo:
        raise InputError("need hi < 2*lo")
    rng = random.Random(seed)
    rows = []
    for i in range(k):
        rows.append(tuple(
            Fraction(0) if i == j else Fraction(rng.randint(lo * denom, hi * denom), denom) for j in range(k)
        ))
    return tuple(rows)


def generic_matrices(k: int, count: int, seed: int = 0) -> list[tuple[int, Matrix]]:
    """The first ``count`` seeds from ``seed`` on whose matrix realizes a maximal type."""
    out = []
    s = seed
    while len(out) < count:
        V = random_generic_matrix(k, s)
        try:
            T = realize_type(V)
        except (NonGeneric, Singular, NotBiconvex):
            T = None
        if T is not None and T.is_maximal():
            out.append((s, V))
        s += 1
    return out
