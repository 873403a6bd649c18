"""Independent reference computations used by the tests.

Nothing here calls into the code under test except for graph containers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np


def comb_fraction(a: int, b: int) -> Fraction:
    return Fraction(math.comb(a, b)) if 0 <= b <= a else Fraction(0)


def n_pairs_exact(n: int, k: int, r: int) -> int:
    """Count (K, M) directly: a (k+r)-set and an r-matching of arbitrary pairs inside it."""
    total = 0
    for K in combinations(range(n), k + r):
        total += _count_matchings(list(K), r)
    return total


def _count_matchings(vs: list[int], r: int) -> int:
    if r == 0:
        return 1
    if len(vs) < 2 * r:
        return 0
    v, rest = vs[0], vs[1:]
    out = _count_matchings(rest, r)
    for i in range(len(rest)):
        out += _count_matchings(rest[:i] + rest[i + 1:], r - 1)
    return out


def expected_ind_sets_exact(n: int, m: int, k: int) -> Fraction:
    T = n * (n - 1) // 2
    return comb_fraction(n, k) * comb_fraction(T - k * (k - 1) // 2, m) / comb_fraction(T, m)


def u_exact(n: int, m: int, k: int, r: int) -> Fraction:
    T = n * (n - 1) // 2
    M1 = math.comb(k + r, 2) - math.comb(2 * r, 2) + r
    if m < r or M1 > T:
        return Fraction(0)
    return comb_fraction(T - M1, m - r) / comb_fraction(T, m)


class GraphCube:
    """All graphs on n vertices as edge bitmasks, with vectorised predicates."""

    def __init__(self, n: int):
        self.n = n
        self.pairs = list(combinations(range(n), 2))
        self.bit = {p: 1 << i for i, p in enumerate(self.pairs)}
        T = len(self.pairs)
        self.masks = np.arange(1 << T, dtype=np.uint32)
        pc = np.zeros(len(self.masks), dtype=np.int64)
        x = self.masks.copy()
        while x.any():
            pc += (x & np.uint32(1)).astype(np.int64)
            x >>= np.uint32(1)
        self.edges = pc

    def pair_bit(self, u: int, v: int) -> int:
        return self.bit[(u, v) if u < v else (v, u)]

    def x_counts(self, k: int, r: int) -> np.ndarray:
        """sum over graphs with m edges of X_{k,r}(G), indexed by m.

        A pair (K, M) counts when M is present, no edge of G[K] touches the
        k - r unmatched vertices, and every outside vertex has two or more
        neighbours among the unmatched vertices.
        """
        n = self.n
        total = np.zeros(len(self.pairs) + 1, dtype=np.int64)
        for K in combinations(range(n), k + r):
            for M in _matchings_of(list(K), r):
                covered = {x for e in M for x in e}
                iso = [v for v in K if v not in covered]
                need = sum(self.pair_bit(u, v) for u, v in M)
                forbid = sum(self.pair_bit(u, v) for u, v in combinations(K, 2)
                             if u in iso or v in iso)
                ok = (self.masks & np.uint32(need)) == np.uint32(need)
                ok &= (self.masks & np.uint32(forbid)) == 0
                for v in range(n):
                    if v in K:
                        continue
                    nb = np.uint32(sum(self.pair_bit(v, w) for w in iso))
                    x = self.masks & nb
                    ok &= (x & (x - np.uint32(1))) != 0  # at least two bits
                total += np.bincount(self.edges[ok], minlength=len(total))
        return total

    def expectation(self, k: int, r: int) -> list[Fraction]:
        T = len(self.pairs)
        counts = self.x_counts(k, r)
        return [Fraction(int(counts[m]), math.comb(T, m)) for m in range(T + 1)]


def _matchings_of(vs: list[int], r: int):
    if r == 0:
        yield []
        return
    if len(vs) < 2 * r:
        return
    v, rest = vs[0], vs[1:]
    yield from _matchings_of(rest, r)
    for i, u in enumerate(rest):
        for m in _matchings_of(rest[:i] + rest[i + 1:], r - 1):
            yield [(v, u)] + m


def alpha_by_cliques(g) -> int:
    """Maximum clique of the complement, by plain recursion (n <= ~12)."""
    h = g.complement()

    def grow(cand: int, size: int) -> int:
        best = size
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            best = max(best, grow(cand & h.adj[v], size + 1))
        return best

    return grow((1 << g.n) - 1, 0)
