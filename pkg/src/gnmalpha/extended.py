"""Extended and augmented independent sets, and the U/W/X/Y/Z pair counts.

A candidate pair is a vertex set K with a matching M on K.  With k = |K| - |M|
and r = |M|, the pair is an extended independent set of order k when G[K] is a
forest whose non-isolated vertices are exactly the vertices covered by M (so M
is its perfect matching), and every vertex outside K sees two isolated vertices
of G[K] or two vertices of a single component of G[K].  The maximum order of
such a pair equals the independence number.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .graph import Graph, InputError, bits_of, iter_bits
from .solver import alpha_exact

BRUTE_MAX_N = 12
COUNT_MAX_N = 16
COUNT_MAX_SIZE = 10


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CandidatePair:
    K: frozenset[int]
    M: frozenset[tuple[int, int]]

    def __post_init__(self):
        covered = set()
        for u, v in self.M:
            if u not in self.K or v not in self.K:
                raise InputError(f"matching pair ({u}, {v}) not inside K")
            if u == v or u in covered or v in covered:
                raise InputError("M is not a matching")
            covered.update((u, v))

    @classmethod
    def of(cls, K: Iterable[int], M: Iterable[tuple[int, int]] = ()) -> "CandidatePair":
        return cls(frozenset(K), frozenset(_pair(u, v) for u, v in M))

    @property
    def r(self) -> int:
        return len(self.M)

    @property
    def k(self) -> int:
        return len(self.K) - len(self.M)

    def covered(self) -> int:
        return bits_of(x for e in self.M for x in e)


@dataclass(frozen=True)
class VariableFlags:
    U: bool
    W: bool
    X: bool
    Y: bool
    Z: bool

    def consistent(self) -> bool:
        imp = lambda a, b: (not a) or b
        return (imp(self.W, self.X) and imp(self.W, self.Y) and imp(self.X, self.Z)
                and imp(self.Y, self.Z) and imp(self.Z, self.U))


class NotMaximumError(InputError):
    """The given set was not a maximum independent set; ``larger`` is a bigger one."""

    def __init__(self, larger: frozenset[int]):
        super().__init__(f"input set is not maximum: found an independent set of size {len(larger)}")
        self.larger = larger


class _Induced:
    """Structure of G[K]: isolated vertices, components, acyclicity."""

    def __init__(self, g: Graph, K: int):
        adj = g.adj
        self.K = K
        edges2 = 0
        iso = 0
        for v in iter_bits(K):
            d = (adj[v] & K).bit_count()
            edges2 += d
            if d == 0:
                iso |= 1 << v
        self.isolated = iso
        self.edges = edges2 // 2
        comps = []
        rest = K & ~iso
        while rest:
            comp = front = rest & -rest
            while front:
                nxt = 0
                for v in iter_bits(front):
                    nxt |= adj[v]
                front = nxt & rest & ~comp
                comp |= front
            comps.append(comp)
            rest &= ~comp
        self.components = comps
        # forest iff edges = vertices - components (isolated vertices count as components)
        self.acyclic = self.edges == K.bit_count() - len(comps) - iso.bit_count()

    def two_isolated(self, nbrs: int) -> bool:
        return (nbrs & self.isolated).bit_count() >= 2

    def two_in_component(self, nbrs: int) -> bool:
        return any((nbrs & c).bit_count() >= 2 for c in self.components)

    def outside_ok(self, g: Graph, isolated_only: bool) -> bool:
        full = (1 << g.n) - 1
        for v in iter_bits(full & ~self.K):
            nb = g.adj[v]
            if self.two_isolated(nb):
                continue
            if isolated_only or not self.two_in_component(nb):
                return False
        return True


def _matching_is_edges(g: Graph, c: CandidatePair) -> bool:
    return all(g.has_edge(u, v) for u, v in c.M)


def _check_range(g: Graph, K: Iterable[int]) -> None:
    for v in K:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range")


def is_extended_ind_set(g: Graph, c: CandidatePair) -> bool:
    _check_range(g, c.K)
    if not _matching_is_edges(g, c):
        return False
    ind = _Induced(g, bits_of(c.K))
    if ind.K & ~ind.isolated != c.covered():
        return False
    return ind.acyclic and ind.outside_ok(g, isolated_only=False)


def is_augmented_ind_set(g: Graph, K: Iterable[int]) -> bool:
    K = list(K)
    _check_range(g, K)
    kb = bits_of(K)
    if any((g.adj[v] & kb).bit_count() > 1 for v in K):
        return False
    full = (1 << g.n) - 1
    return all((g.adj[v] & kb).bit_count() >= 2 for v in iter_bits(full & ~kb))


def augmented_order(g: Graph, K: Iterable[int]) -> int:
    kb = bits_of(K)
    return kb.bit_count() - sum((g.adj[v] & kb).bit_count() for v in iter_bits(kb)) // 2


def classify_pair(g: Graph, c: CandidatePair) -> VariableFlags:
    _check_range(g, c.K)
    kb = bits_of(c.K)
    cov = c.covered()
    U = _matching_is_edges(g, c) and all(g.adj[v] & kb & ~cov == 0 for v in iter_bits(kb))
    if not U:
        return VariableFlags(False, False, False, False, False)
    ind = _Induced(g, kb)
    X = ind.outside_ok(g, isolated_only=True)
    Z = X or ind.outside_ok(g, isolated_only=False)
    return VariableFlags(True, X and ind.acyclic, X, Z and ind.acyclic, Z)


def _matchings(g: Graph, S: int, size: int) -> Iterator[list[tuple[int, int]]]:
    """All matchings of ``size`` edges of g inside S (each listed once)."""
    if size == 0:
        yield []
        return
    if S.bit_count() < 2 * size:
        return
    v = (S & -S).bit_length() - 1
    rest = S & ~(1 << v)
    # matchings avoiding v, then those using an edge at v
    yield from _matchings(g, rest, size)
    for u in iter_bits(g.adj[v] & rest):
        for m in _matchings(g, rest & ~(1 << u), size - 1):
            yield [(v, u)] + m


def _perfect_matchings(g: Graph, S: int) -> Iterator[list[tuple[int, int]]]:
    if S.bit_count() % 2:
        return iter(())
    return _matchings(g, S, S.bit_count() // 2)


def max_extended_order(g: Graph, mode: str = "brute", limit: int = BRUTE_MAX_N) -> tuple[int, CandidatePair]:
    """Largest order of an extended independent set, with a witness pair.

    ``brute`` tries every vertex set K and every perfect matching of the
    non-isolated part of G[K]; ``construct`` extends a maximum independent set.
    """
    if mode == "construct":
        S = alpha_exact(g).witness
        c = extend_from_mis(g, S)
        return c.k, c
    if mode != "brute":
        raise InputError(f"unknown mode {mode!r}")
    if g.n > limit:
        raise InputError(f"brute-force extended search limited to n <= {limit}")
    best = -1
    witness = CandidatePair.of(())
    for K in range(1 << g.n):
        ind = _Induced(g, K)
        nonisolated = K & ~ind.isolated
        order_if_any = K.bit_count() - nonisolated.bit_count() // 2
        if order_if_any <= best or not ind.acyclic:
            continue
        if not ind.outside_ok(g, isolated_only=False):
            continue
        for M in _perfect_matchings(g, nonisolated):
            best = order_if_any
            witness = CandidatePair.of(iter_bits(K), M)
            break
    if g.n == 0:
        best = 0
    return best, witness


def extend_from_mis(g: Graph, S: Iterable[int]) -> CandidatePair:
    """Grow an independent set S into an extended independent set of the same order.

    Outside vertices violating the two-neighbour rule are handled in ascending
    order: a violator v with an isolated neighbour w (lowest index) joins K and
    vw joins M.  A violator without isolated neighbours shows S was not maximum;
    the larger independent set is built and raised in NotMaximumError.
    """
    S = list(S)
    _check_range(g, S)
    if not g.is_independent(S):
        raise InputError("S is not independent")
    T = bits_of(S)
    M: list[tuple[int, int]] = []
    full = (1 << g.n) - 1
    while True:
        ind = _Induced(g, T)
        violator = -1
        for v in iter_bits(full & ~T):
            nb = g.adj[v]
            if not (ind.two_isolated(nb) or ind.two_in_component(nb)):
                violator = v
                break
        if violator < 0:
            return CandidatePair.of(iter_bits(T), M)
        v = violator
        iso_nb = g.adj[v] & ind.isolated
        if iso_nb:
            w = (iso_nb & -iso_nb).bit_length() - 1
            T |= 1 << v
            M.append((w, v))
            continue
        raise NotMaximumError(_larger_set(g, ind, M, v))


def _larger_set(g: Graph, ind: _Induced, M: list[tuple[int, int]], v: int) -> frozenset[int]:
    # v touches each tree component at most once; in each tree take the colour
    # class missing v's neighbour, then add v and every isolated vertex
    out = set(iter_bits(ind.isolated)) | {v}
    for comp in ind.components:
        side = _two_colour(g, comp)
        hit = g.adj[v] & comp
        if hit & side:
            side = comp & ~side
        out.update(iter_bits(side))
    return frozenset(out)


def _two_colour(g: Graph, comp: int) -> int:
    root = comp & -comp
    side, seen, front, parity = root, root, root, 0
    while front:
        nxt = 0
        for u in iter_bits(front):
            nxt |= g.adj[u]
        front = nxt & comp & ~seen
        seen |= front
        parity ^= 1
        if not parity:
            side |= front
    return side


def count_variables(g: Graph, k: int, r: int) -> dict[str, int]:
    """Exact U, W, X, Y, Z counts over all (K, M) with |K| = k + r and |M| = r."""
    if not 0 <= r <= k:
        raise InputError("need 0 <= r <= k")
    if g.n > COUNT_MAX_N or k + r > COUNT_MAX_SIZE:
        raise InputError(f"exhaustive counting limited to n <= {COUNT_MAX_N}, k + r <= {COUNT_MAX_SIZE}")
    counts = dict.fromkeys("UWXYZ", 0)
    for K in combinations(range(g.n), k + r):
        kb = bits_of(K)
        for M in _matchings(g, kb, r):
            f = classify_pair(g, CandidatePair.of(K, M))
            for name in "UWXYZ":
                counts[name] += getattr(f, name)
    return counts


def count_x(g: Graph, k: int, r: int) -> int:
    """X_{k,r} alone; skips the component analysis that count_variables does."""
    count = 0
    full = (1 << g.n) - 1
    adj = g.adj
    for K in combinations(range(g.n), k + r):
        kb = bits_of(K)
        for M in _matchings(g, kb, r):
            cov = bits_of(x for e in M for x in e)
            iso = kb & ~cov
            if any(adj[v] & iso for v in iter_bits(kb)):
                continue
            if all((adj[v] & iso).bit_count() >= 2 for v in iter_bits(full & ~kb)):
                count += 1
    return count
