"""Matroids stored as explicit base collections over a 0-based ground set.

Every subset argument accepts either an iterable of element indices or an
``int`` bitmask. Rank is ``max |B & A|`` over bases, which is correct by
definition and cheap at the sizes used here (n <= 16).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from . import subsets as ss
from .errors import (
    EmptyCollection,
    EmptySubset,
    ExchangeViolation,
    IndexOutOfRange,
    LemmaViolation,
    LoopyMatroid,
    MapMismatch,
    MixedCardinality,
    PreconditionViolated,
    RankMismatch,
    RankOutOfRange,
)

SubsetLike = Iterable[int] | int


@dataclass(frozen=True)
class Matroid:
    """A matroid on ``range(n)`` given by its bases (bitmasks, lex-sorted).

    Construct through :func:`make_matroid` unless the collection is known to
    satisfy the exchange property.
    """

    n: int
    k: int
    bases: tuple[int, ...]
    _rank_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(sorted(set(self.bases), key=ss.lex_key)))

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(range(self.n))

    @property
    def base_set(self) -> frozenset[int]:
        bs = self._rank_cache.get("__base_set__")
        if bs is None:
            bs = frozenset(self.bases)
            self._rank_cache["__base_set__"] = bs
        return bs

    def base_sets(self) -> list[frozenset[int]]:
        return [ss.to_set(b) for b in self.bases]

    def __len__(self) -> int:
        return len(self.bases)

    def __contains__(self, B) -> bool:
        return ss.to_mask(B, self.n) in self.base_set

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, k={self.k}, |bases|={len(self.bases)})"

    def to_json(self) -> dict:
        return {"n": self.n, "rank": self.k, "bases": [list(ss.members(b)) for b in self.bases]}

    @classmethod
    def from_json(cls, data: dict, verify: bool = True) -> "Matroid":
        M = make_matroid(data["n"], data["bases"], verify=verify)
        if M.k != data.get("rank", M.k):
            raise MixedCardinality(f"declared rank {data['rank']} but bases have size {M.k}")
        return M


def _check_exchange(base_set: frozenset[int]) -> None:
    """Raise ExchangeViolation unless every A, B, x in A-B has y in B-A with A-x+y a basis."""
    if not base_set:
        return
    n = max(base_set).bit_length()
    if len(base_set) < 64 or n > 62:
        _check_exchange_pairs(base_set)
        return
    arr = np.fromiter(base_set, dtype=np.int64, count=len(base_set))
    for A in base_set:
        diff = A & ~arr
        only_b = arr & ~A
        for x in ss.members(A):
            rest = A ^ (1 << x)
            ymask = 0
            for y in range(n):
                if not (A >> y) & 1 and (rest | (1 << y)) in base_set:
                    ymask |= 1 << y
            bad = (((diff >> x) & 1) == 1) & ((only_b & ymask) == 0)
            if bad.any():
                B = int(arr[np.argmax(bad)])
                raise ExchangeViolation(ss.to_set(A), ss.to_set(B), x)


def _check_exchange_pairs(base_set: frozenset[int]) -> None:
    for A in base_set:
        for B in base_set:
            if A == B:
                continue
            only_b = B & ~A
            diff = A & ~B
            while diff:
                x = diff & -diff
                diff ^= x
                rest = A ^ x
                cand = only_b
                ok = False
                while cand:
                    y = cand & -cand
                    cand ^= y
                    if rest | y in base_set:
                        ok = True
                        break
                if not ok:
                    raise ExchangeViolation(ss.to_set(A), ss.to_set(B), x.bit_length() - 1)


def is_base_collection(bases: Iterable[int]) -> bool:
    """True iff the (non-empty, equicardinal) masks satisfy base exchange."""
    bs = frozenset(bases)
    if not bs or len({b.bit_count() for b in bs}) != 1:
        return False
    try:
        _check_exchange(bs)
    except ExchangeViolation:
        return False
    return True


def make_matroid(n: int, bases: Iterable[SubsetLike], verify: bool = True) -> Matroid:
    """Build a matroid from a base collection, checking the exchange axiom.

    Raises EmptyCollection, MixedCardinality, IndexOutOfRange or
    ExchangeViolation. ``verify=False`` skips only the exchange check.
    """
    if n <= 0:
        raise IndexOutOfRange(f"ground size must be positive, got {n}")
    masks = {ss.to_mask(B, n) for B in bases}
    if not masks:
        raise EmptyCollection("a matroid needs at least one basis")
    sizes = {m.bit_count() for m in masks}
    if len(sizes) != 1:
        raise MixedCardinality(f"bases have cardinalities {sorted(sizes)}")
    if verify:
        _check_exchange(frozenset(masks))
    return Matroid(n, sizes.pop(), tuple(masks))


def _mask(M: Matroid, A: SubsetLike) -> int:
    return ss.to_mask(A, M.n)


def rank_mask(M: Matroid, a: int) -> int:
    cache = M._rank_cache
    r = cache.get(a)
    if r is None:
        r = max((b & a).bit_count() for b in M.bases)
        cache[a] = r
    return r


def rank(M: Matroid, A: SubsetLike) -> int:
    return rank_mask(M, _mask(M, A))


def closure_mask(M: Matroid, a: int) -> int:
    r = rank_mask(M, a)
    out = a
    for s in range(M.n):
        bit = 1 << s
        if not a & bit and rank_mask(M, a | bit) == r:
            out |= bit
    return out


def closure(M: Matroid, A: SubsetLike) -> frozenset[int]:
    return ss.to_set(closure_mask(M, _mask(M, A)))


def is_flat(M: Matroid, A: SubsetLike) -> bool:
    a = _mask(M, A)
    return closure_mask(M, a) == a


def flat_masks(M: Matroid) -> list[int]:
    cache = M._rank_cache
    out = cache.get("__flats__")
    if out is None:
        out = [a for a in ss.all_subsets(M.n) if closure_mask(M, a) == a]
        out.sort(key=lambda a: (a.bit_count(), ss.lex_key(a)))
        cache["__flats__"] = out
    return out


def flats(M: Matroid) -> list[frozenset[int]]:
    """All flats, by brute force over the 2^n subsets."""
    return [ss.to_set(a) for a in flat_masks(M)]


def loops(M: Matroid) -> frozenset[int]:
    union = 0
    for b in M.bases:
        union |= b
    return ss.to_set(ss.full(M.n) & ~union)


def coloops(M: Matroid) -> frozenset[int]:
    inter = ss.full(M.n)
    for b in M.bases:
        inter &= b
    return ss.to_set(inter)


def is_loopless(M: Matroid) -> bool:
    return not loops(M)


def dual(M: Matroid) -> Matroid:
    f = ss.full(M.n)
    return Matroid(M.n, M.n - M.k, tuple(f & ~b for b in M.bases))


def _max_trace(M: Matroid, a: int) -> tuple[int, list[int]]:
    r = rank_mask(M, a)
    return r, [b for b in M.bases if (b & a).bit_count() == r]


def restrict(M: Matroid, A: SubsetLike) -> Matroid:
    """M|_A, relabelled order-preservingly onto ``range(|A|)``."""
    a = _mask(M, A)
    if not a:
        raise EmptySubset("restriction to the empty set")
    pos = ss.members(a)
    r, bs = _max_trace(M, a)
    return Matroid(len(pos), r, tuple({ss.relabel(b & a, pos) for b in bs}))


def contract(M: Matroid, A: SubsetLike) -> Matroid:
    """M/A on the complement of A, relabelled onto ``range(n - |A|)``."""
    a = _mask(M, A)
    if not a:
        raise EmptySubset("contraction by the empty set")
    rest = ss.full(M.n) & ~a
    if not rest:
        raise EmptySubset("contraction by the whole ground set")
    pos = ss.members(rest)
    r, bs = _max_trace(M, a)
    return Matroid(len(pos), M.k - r, tuple({ss.relabel(b & rest, pos) for b in bs}))


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    """M1 on ``range(n1)`` plus M2 shifted onto ``range(n1, n1 + n2)``."""
    sh = M1.n
    return Matroid(M1.n + M2.n, M1.k + M2.k, tuple(b1 | (b2 << sh) for b1 in M1.bases for b2 in M2.bases))


def embed_direct_sum(n: int, parts: Sequence[tuple[Matroid, Sequence[int]]]) -> Matroid:
    """Direct sum of matroids placed on given disjoint position lists of ``range(n)``."""
    bases = [0]
    k = 0
    for N, pos in parts:
        if len(pos) != N.n:
            raise MapMismatch("position list does not match ground size")
        placed = [ss.embed(b, pos) for b in N.bases]
        bases = [x | y for x in bases for y in placed]
        k += N.k
    return Matroid(n, k, tuple(bases))


def decompose_mask(M: Matroid, a: int) -> Matroid:
    # bases of M|_A + M/A are exactly the bases of M meeting A in r(A) elements
    _, bs = _max_trace(M, a)
    return Matroid(M.n, M.k, tuple(bs))


def decompose(M: Matroid, A: SubsetLike) -> Matroid:
    """M(A) = M|_A + M/A on the original labelling."""
    return decompose_mask(M, _mask(M, A))


def decompose_by_definition(M: Matroid, A: SubsetLike) -> Matroid:
    """Same as :func:`decompose`, assembled from restrict/contract/direct sum."""
    a = _mask(M, A)
    rest = ss.full(M.n) & ~a
    if not a or not rest:
        return M
    return embed_direct_sum(M.n, [(restrict(M, a), ss.members(a)), (contract(M, a), ss.members(rest))])


def iterated_decompose(M: Matroid, As: Iterable[SubsetLike]) -> Matroid:
    for A in As:
        M = decompose(M, A)
    return M


def _components_circuits(M: Matroid) -> list[int]:
    n = M.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    B0 = M.bases[0]
    bs = M.base_set
    for e in range(n):
        if B0 >> e & 1:
            continue
        for b in ss.members(B0):
            if (B0 & ~(1 << b)) | (1 << e) in bs:
                parent[find(e)] = find(b)
    groups: dict[int, int] = {}
    for e in range(n):
        r = find(e)
        groups[r] = groups.get(r, 0) | (1 << e)
    return sorted(groups.values(), key=ss.lex_key)


def _components_brute(M: Matroid) -> list[int]:
    f = ss.full(M.n)
    rk = M.k
    seps = [a for a in range(1, f + 1) if rank_mask(M, a) + rank_mask(M, f & ~a) == rk]
    minimal = [a for a in seps if not any(s != a and s & a == s for s in seps)]
    return sorted(minimal, key=ss.lex_key)


def component_masks(M: Matroid, method: str = "circuits") -> list[int]:
    if method == "circuits":
        cache = M._rank_cache
        out = cache.get("__comps__")
        if out is None:
            out = _components_circuits(M)
            cache["__comps__"] = out
        return out
    if method == "brute":
        return _components_brute(M)
    raise ValueError(f"unknown method {method!r}")


def connected_components(M: Matroid, method: str = "circuits") -> tuple[int, list[frozenset[int]]]:
    """Return (kappa, partition into minimal non-empty separators).

    ``method="circuits"`` links each non-basis element with its fundamental
    circuit; ``method="brute"`` searches all 2^n subsets for separators.
    Loops and coloops form singleton components.
    """
    parts = component_masks(M, method)
    return len(parts), [ss.to_set(p) for p in parts]


def kappa(M: Matroid) -> int:
    return len(component_masks(M))


def is_connected(M: Matroid) -> bool:
    return kappa(M) == 1


def is_modular_pair(M: Matroid, F: SubsetLike, L: SubsetLike) -> bool:
    f, l = _mask(M, F), _mask(M, L)
    return rank_mask(M, f) + rank_mask(M, l) == rank_mask(M, f | l) + rank_mask(M, f & l)


def is_separator(M: Matroid, A: SubsetLike) -> bool:
    a = _mask(M, A)
    return is_modular_pair(M, a, ss.full(M.n) & ~a)


def is_nondegenerate(M: Matroid, A: SubsetLike) -> bool:
    """kappa(M(A)) == kappa(M) + 1."""
    a = _mask(M, A)
    return kappa(decompose_mask(M, a)) == kappa(M) + 1


def nondegenerate_flat_masks(M: Matroid) -> list[int]:
    cache = M._rank_cache
    out = cache.get("__ndflats__")
    if out is None:
        f = ss.full(M.n)
        base = kappa(M) + 1
        out = [a for a in flat_masks(M) if a and a != f and kappa(decompose_mask(M, a)) == base]
        cache["__ndflats__"] = out
    return out


def nondegenerate_flats(M: Matroid) -> list[frozenset[int]]:
    return [ss.to_set(a) for a in nondegenerate_flat_masks(M)]


def minimal_nondegenerate_flat_masks(M: Matroid) -> list[int]:
    # F and F + (a whole component) give the same face M(F); the minimal
    # representative of each such class contains no full component.
    comps = component_masks(M)
    return [a for a in nondegenerate_flat_masks(M) if not any(c & a == c for c in comps)]


def minimal_nondegenerate_flats(M: Matroid) -> list[frozenset[int]]:
    """Non-degenerate flats F that are the unique minimal subset giving the face M(F)."""
    return [ss.to_set(a) for a in minimal_nondegenerate_flat_masks(M)]


def uniform(k: int, n: int) -> Matroid:
    if not 0 <= k <= n or n <= 0:
        raise RankOutOfRange(f"need 0 <= k <= n, n > 0; got k={k}, n={n}")
    return Matroid(n, k, tuple(ss.k_subsets(n, k)))


def truncate(M: Matroid, k: int) -> Matroid:
    """M^(<=k): bases are the independent k-sets of M."""
    if not 0 <= k <= M.k:
        raise RankOutOfRange(f"cannot truncate rank {M.k} matroid to rank {k}")
    if k == M.k:
        return M
    return Matroid(M.n, k, tuple(s for s in ss.k_subsets(M.n, k) if rank_mask(M, s) == k))


@dataclass(frozen=True)
class GroundMap:
    domain_size: int
    codomain_size: int
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if len(self.image) != self.domain_size:
            raise MapMismatch("image length differs from domain size")
        if any(not 0 <= x < self.codomain_size for x in self.image):
            raise IndexOutOfRange("image value outside codomain")

    @classmethod
    def identity(cls, n: int) -> "GroundMap":
        return cls(n, n, tuple(range(n)))

    def apply(self, a: int) -> int:
        out = 0
        for i in ss.members(a):
            out |= 1 << self.image[i]
        return out

    def preimage(self, a: int) -> int:
        out = 0
        for i, x in enumerate(self.image):
            if a >> x & 1:
                out |= 1 << i
        return out


def pullback(f: GroundMap, M: Matroid) -> Matroid:
    """f*(M): independent sets are A with f injective on A and f(A) independent."""
    if f.codomain_size != M.n:
        raise MapMismatch("pullback needs codomain == ground set of M")
    r = rank_mask(M, f.apply(ss.full(f.domain_size)))
    bases = []
    for a in ss.k_subsets(f.domain_size, r):
        fa = f.apply(a)
        if fa.bit_count() == r and rank_mask(M, fa) == r:
            bases.append(a)
    return Matroid(f.domain_size, r, tuple(bases))


def pushforward(f: GroundMap, M: Matroid) -> Matroid:
    """f_*(M): independent sets are images f(I) of independent sets."""
    if f.domain_size != M.n:
        raise MapMismatch("pushforward needs domain == ground set of M")
    imgs = [f.apply(b) for b in M.bases]
    r = max(i.bit_count() for i in imgs)
    return Matroid(f.codomain_size, r, tuple(i for i in imgs if i.bit_count() == r))


def simplify(M: Matroid) -> tuple[Matroid, GroundMap]:
    """Collapse parallel classes; returns (simple matroid, class map)."""
    if not is_loopless(M):
        raise LoopyMatroid("simplification map is defined here for loopless matroids")
    classes: list[int] = []
    image = [0] * M.n
    for e in range(M.n):
        for j, c in enumerate(classes):
            if c >> e & 1:
                image[e] = j
                break
        else:
            classes.append(closure_mask(M, 1 << e))
            image[e] = len(classes) - 1
    f = GroundMap(M.n, len(classes), tuple(image))
    return pushforward(f, M), f


@dataclass(frozen=True)
class BaseIntersection:
    bases: tuple[frozenset[int], ...]
    matroid: Matroid | None

    @property
    def is_matroid(self) -> bool:
        return self.matroid is not None


def base_intersection_masks(M1: Matroid, M2: Matroid) -> frozenset[int]:
    if M1.n != M2.n or M1.k != M2.k:
        raise RankMismatch(f"ground/rank differ: ({M1.n},{M1.k}) vs ({M2.n},{M2.k})")
    return M1.base_set & M2.base_set


def base_intersection(M1: Matroid, M2: Matroid) -> BaseIntersection:
    common = base_intersection_masks(M1, M2)
    mat = None
    if common and is_base_collection(common):
        mat = Matroid(M1.n, M1.k, tuple(common))
    ordered = sorted(common, key=ss.lex_key)
    return BaseIntersection(tuple(ss.to_set(b) for b in ordered), mat)


def initial_matroid(M: Matroid, u: Sequence[int]) -> Matroid:
    """Face matroid of BP_M on which the functional u is maximised."""
    if len(u) != M.n:
        raise MapMismatch("weight vector length differs from ground size")
    scores = [sum(u[i] for i in ss.members(b)) for b in M.bases]
    best = max(scores)
    return Matroid(M.n, M.k, tuple(b for b, s in zip(M.bases, scores) if s == best))


class Codim2Case(enum.Enum):
    DISJOINT_UNION = "DisjointUnion"
    COVERING_INTERSECTION = "CoveringIntersection"
    NESTED_CHAIN = "NestedChain"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class Codim2Result:
    case: Codim2Case
    matroid: Matroid | None


def codim2_face(M: Matroid, F: SubsetLike, L: SubsetLike) -> Matroid | None:
    """Matroid of BP_M(F) & BP_M(L) if it is a non-empty loopless codim-2 face, else None."""
    f, l = _mask(M, F), _mask(M, L)
    common = decompose_mask(M, f).base_set & decompose_mask(M, l).base_set
    if not common:
        return None
    union = 0
    for b in common:
        union |= b
    if union != ss.full(M.n):
        return None
    N = Matroid(M.n, M.k, tuple(common))
    if kappa(N) != kappa(M) + 2:
        return None
    return N


def classify_codim2(M: Matroid, F: SubsetLike, L: SubsetLike) -> Codim2Result:
    """Sort a loopless codimension-2 intersection BP_M(F) & BP_M(L) into its row.

    M must be inseparable of rank >= 3 and F, L distinct non-degenerate flats
    with r(F) >= r(L). Raises LemmaViolation if no row (or the wrong
    factorisation) applies.
    """
    if M.k < 3 or kappa(M) != 1:
        raise PreconditionViolated("need an inseparable matroid of rank >= 3")
    f, l = _mask(M, F), _mask(M, L)
    if f == l:
        raise PreconditionViolated("F and L must be distinct")
    if rank_mask(M, f) < rank_mask(M, l):
        raise PreconditionViolated("need r(F) >= r(L)")
    for a in (f, l):
        if closure_mask(M, a) != a or not is_nondegenerate(M, a):
            raise PreconditionViolated(f"{sorted(ss.members(a))} is not a non-degenerate flat")
    N = codim2_face(M, f, l)
    if N is None:
        return Codim2Result(Codim2Case.NOT_APPLICABLE, None)
    full = ss.full(M.n)
    if not f & l:
        case, expected = Codim2Case.DISJOINT_UNION, decompose_mask(M, f | l)
    elif f | l == full:
        case, expected = Codim2Case.COVERING_INTERSECTION, decompose_mask(M, f & l)
    elif f & l == l:
        case = Codim2Case.NESTED_CHAIN
        expected = _nested_chain(M, f, l)
    else:
        raise LemmaViolation(f"F={ss.members(f)}, L={ss.members(l)} match no row of the codim-2 table")
    if expected.base_set != N.base_set:
        raise LemmaViolation(f"{case.value}: factorised matroid differs from the face")
    return Codim2Result(case, N)


def _nested_chain(M: Matroid, f: int, l: int) -> Matroid:
    """M/F + M|_F/L + M|_L on the original labels, for L strictly inside F."""
    full = ss.full(M.n)
    parts = []
    rest = full & ~f
    if rest:
        parts.append((contract(M, f), ss.members(rest)))
    MF = restrict(M, f)
    fpos = ss.members(f)
    l_in_f = ss.relabel(l, fpos)
    mid = f & ~l
    if mid:
        parts.append((contract(MF, l_in_f), ss.members(mid)))
    parts.append((restrict(M, l), ss.members(l)))
    return embed_direct_sum(M.n, parts)


def permutation_invariant(M: Matroid, As: Sequence[SubsetLike]) -> bool | None:
    """Check that iterated decomposition by As is order independent.

    Returns None when the base intersection of the M(A_i) is empty or has a
    loop (the claim does not apply), else whether every order agrees with it.
    """
    masks = [_mask(M, A) for A in As]
    common = M.base_set
    for a in masks:
        common = common & decompose_mask(M, a).base_set
    if not common:
        return None
    union = 0
    for b in common:
        union |= b
    if union != ss.full(M.n):
        return None
    for order in permutations(masks):
        if iterated_decompose(M, order).base_set != common:
            return False
    return True


def has_uniform_minor_restriction(M: Matroid) -> bool:
    """True if some (k+1)-subset restricts to U(k, k+1)."""
    k = M.k
    if k >= M.n:
        return False
    for s in ss.k_subsets(M.n, k + 1):
        if all((s & ~(1 << e)) in M.base_set for e in ss.members(s)):
            return True
    return False


__all__ = [
    "Matroid",
    "GroundMap",
    "BaseIntersection",
    "Codim2Case",
    "Codim2Result",
    "make_matroid",
    "is_base_collection",
    "rank",
    "closure",
    "is_flat",
    "flats",
    "loops",
    "coloops",
    "is_loopless",
    "dual",
    "restrict",
    "contract",
    "direct_sum",
    "embed_direct_sum",
    "decompose",
    "decompose_by_definition",
    "iterated_decompose",
    "connected_components",
    "kappa",
    "is_connected",
    "is_modular_pair",
    "is_separator",
    "is_nondegenerate",
    "nondegenerate_flats",
    "minimal_nondegenerate_flats",
    "uniform",
    "truncate",
    "pullback",
    "pushforward",
    "simplify",
    "base_intersection",
    "initial_matroid",
    "codim2_face",
    "classify_codim2",
    "permutation_invariant",
    "has_uniform_minor_restriction",
]
