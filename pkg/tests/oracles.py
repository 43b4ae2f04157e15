"""Independent brute-force oracles and random matroid generators for tests."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from tropmat import matroid as mt
from tropmat.matroid import Matroid


def mat_rank(cols) -> int:
    """Rank over Q by plain Gaussian elimination (kept separate from the package's rref)."""
    rows = [list(map(Fraction, c)) for c in cols]
    r = 0
    if not rows:
        return 0
    width = len(rows[0])
    for c in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


class LinearMatroid:
    """Column matroid of a small integer matrix, with a rank oracle independent of bases."""

    def __init__(self, columns):
        self.columns = [tuple(c) for c in columns]
        self.n = len(self.columns)
        self.k = mat_rank(self.columns)

    def rank(self, A) -> int:
        return mat_rank([self.columns[i] for i in A])

    def bases(self) -> list[frozenset[int]]:
        return [frozenset(s) for s in combinations(range(self.n), self.k) if self.rank(s) == self.k]

    def matroid(self) -> Matroid:
        return mt.make_matroid(self.n, self.bases())


def random_linear(rng: random.Random, n: int, k: int, lo: int = -2, hi: int = 2, zero_p: float = 0.3) -> LinearMatroid:
    while True:
        cols = []
        for _ in range(n):
            cols.append(tuple(0 if rng.random() < zero_p else rng.randint(lo, hi) for _ in range(k)))
        L = LinearMatroid(cols)
        if L.k >= 1:
            return L


def random_matroid(rng: random.Random, max_n: int = 7) -> Matroid:
    """Linear matroids, their duals, and direct sums of two small ones."""
    mode = rng.random()
    if mode < 0.6:
        n = rng.randint(2, max_n)
        return random_linear(rng, n, rng.randint(1, n)).matroid()
    if mode < 0.8:
        n = rng.randint(2, max_n)
        return mt.dual(random_linear(rng, n, rng.randint(1, n)).matroid())
    n1 = rng.randint(1, max_n - 1)
    n2 = rng.randint(1, max_n - n1)
    a = random_linear(rng, n1, rng.randint(1, n1)).matroid()
    b = random_linear(rng, n2, rng.randint(1, n2)).matroid()
    return mt.direct_sum(a, b)


def random_loopless(rng: random.Random, max_n: int = 7) -> Matroid:
    while True:
        M = random_matroid(rng, max_n)
        if mt.is_loopless(M):
            return M


def random_subset(rng: random.Random, n: int, nonempty: bool = False) -> frozenset[int]:
    while True:
        s = frozenset(i for i in range(n) if rng.random() < 0.5)
        if s or not nonempty:
            return s


def brute_rank(bases, A) -> int:
    return max(len(set(B) & set(A)) for B in bases)


def brute_components(M: Matroid) -> list[frozenset[int]]:
    """Minimal non-empty separators via r(A) + r(E - A) = r(E)."""
    n = M.n
    bases = M.base_sets()
    seps = []
    for r in range(1, n + 1):
        for A in combinations(range(n), r):
            A = frozenset(A)
            comp = frozenset(range(n)) - A
            if brute_rank(bases, A) + (brute_rank(bases, comp) if comp else 0) == M.k:
                if not any(s <= A for s in seps):
                    seps.append(A)
    return seps


def brute_tconv_points(V, x) -> bool:
    """x in tconv(rows of V) iff x = min_i (lam_i + v_i) for the tightest lam (classical)."""
    k = len(V)
    lam = [max(Fraction(x[j]) - Fraction(V[i][j]) for j in range(k)) for i in range(k)]
    y = [min(lam[i] + Fraction(V[i][j]) for i in range(k)) for j in range(k)]
    return len({a - Fraction(b) for a, b in zip(y, x)}) == 1


def brute_exchange(bases) -> bool:
    """Base exchange by the definition, on bitmasks."""
    bs = set(bases)
    for a in bs:
        for b in bs:
            d = a & ~b
            while d:
                x = d & -d
                d ^= x
                e = b & ~a
                ok = False
                while e:
                    y = e & -e
                    e ^= y
                    if (a ^ x) | y in bs:
                        ok = True
                        break
                if not ok:
                    return False
    return True
