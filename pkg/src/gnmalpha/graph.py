"""Graphs, bipartite 0-1 matrices and their uniform samplers.

Adjacency rows and matrix rows are Python ints used as bit-vectors: bit ``v``
of ``adj[u]`` is set iff ``uv`` is an edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .rng import SeedSpec


class InputError(ValueError):
    """Invalid arguments supplied by the caller."""


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_of(vertices: Iterable[int]) -> int:
    s = 0
    for v in vertices:
        s |= 1 << v
    return s


# colexicographic pair index: (u, v) with u < v  <->  v(v-1)/2 + u
def pair_index(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pair_from_index(i: int) -> tuple[int, int]:
    v = (1 + math.isqrt(1 + 8 * i)) // 2
    if v * (v - 1) // 2 > i:
        v -= 1
    return i - v * (v - 1) // 2, v


def _pairs_from_indices(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    v = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) // 2).astype(np.int64)
    idx = idx.astype(np.int64)
    # float sqrt may be off by one for large indices
    v -= (v * (v - 1) // 2 > idx).astype(np.int64)
    v += ((v + 1) * v // 2 <= idx).astype(np.int64)
    return idx - v * (v - 1) // 2, v


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    m: int

    @classmethod
    def from_rows(cls, adj: Sequence[int]) -> "Graph":
        m = sum(row.bit_count() for row in adj) // 2
        return cls(len(adj), tuple(adj), m)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in iter_bits(self.adj[v] & ((1 << v) - 1))]

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph.from_rows([(full ^ row) & ~(1 << v) for v, row in enumerate(self.adj)])

    def is_independent(self, vertices: Iterable[int]) -> bool:
        s = bits_of(vertices)
        return all(not (self.adj[v] & s) for v in iter_bits(s))

    def check(self) -> None:
        """Assert the representation invariants (symmetry, no loops, cached m)."""
        total = 0
        for u, row in enumerate(self.adj):
            assert row >> self.n == 0, "bit beyond n"
            assert not (row >> u & 1), "self-loop"
            for v in iter_bits(row):
                assert self.adj[v] >> u & 1, "asymmetric adjacency"
            total += row.bit_count()
        assert total == 2 * self.m, "cached edge count"

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows:
            raise InputError("empty graph file")
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
        if len(edges) != m:
            raise InputError(f"header says {m} edges, found {len(edges)}")
        return make_graph(n, edges)


def make_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 0:
        raise InputError("vertex count must be non-negative")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"vertex out of range in edge ({u}, {v})")
        if u == v:
            raise InputError(f"self-loop at {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph.from_rows(adj)


def _graph_from_pair_indices(n: int, idx: np.ndarray) -> Graph:
    adj = [0] * n
    if len(idx):
        us, vs = _pairs_from_indices(np.asarray(idx))
        for u, v in zip(us.tolist(), vs.tolist()):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return Graph.from_rows(adj)


def _partial_fisher_yates(population: int, k: int, seed: SeedSpec) -> list[int]:
    """First ``k`` entries of a seeded Fisher-Yates shuffle of ``range(population)``.

    Swaps live in a dict, so memory is O(k) whatever the population.
    """
    stream = seed.stream()
    swapped: dict[int, int] = {}
    out = []
    for j in range(k):
        t = j + stream.randbelow(population - j)
        vt = swapped.get(t, t)
        swapped[t] = swapped.get(j, j)
        out.append(vt)
    return out


def sample_gnm(n: int, m: int, seed: SeedSpec) -> Graph:
    """Uniform graph on n labelled vertices with exactly m edges."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise InputError(f"m={m} outside [0, {total}]")
    return _graph_from_pair_indices(n, np.array(_partial_fisher_yates(total, m, seed), dtype=np.int64))


_CHUNK = 1 << 20


def _bernoulli_indices(count: int, p: float, seed: SeedSpec) -> np.ndarray:
    """Indices i < count with uniform word i below p (word i drives cell i)."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p={p} outside [0, 1]")
    stream = seed.stream()
    hits = []
    for start in range(0, count, _CHUNK):
        u = stream.uniforms(min(_CHUNK, count - start))
        hits.append(np.flatnonzero(u < p) + start)
    return np.concatenate(hits) if hits else np.zeros(0, dtype=np.int64)


def sample_gnp(n: int, p: float, seed: SeedSpec) -> Graph:
    """Binomial random graph: each pair present independently with probability p."""
    return _graph_from_pair_indices(n, _bernoulli_indices(n * (n - 1) // 2, p, seed))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph induced on ``vertices``, relabelled 0.. in ascending order."""
    vs = sorted(set(vertices))
    for v in vs:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range")
    pos = {v: i for i, v in enumerate(vs)}
    mask = bits_of(vs)
    return Graph.from_rows([bits_of(pos[w] for w in iter_bits(g.adj[v] & mask)) for v in vs])


@dataclass(frozen=True)
class BipartiteMatrix:
    beta: int
    gamma: int
    rows: tuple[int, ...]
    kappa: int

    @classmethod
    def from_rows(cls, gamma: int, rows: Sequence[int]) -> "BipartiteMatrix":
        return cls(len(rows), gamma, tuple(rows), sum(r.bit_count() for r in rows))

    def row_sums(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j in iter_bits(r)]

    def check(self) -> None:
        assert all(r >> self.gamma == 0 for r in self.rows)
        assert self.kappa == sum(self.row_sums())
        assert 0 <= self.kappa <= self.beta * self.gamma

    def to_text(self) -> str:
        lines = [f"{self.beta} {self.gamma} {self.kappa}"] + [f"{i} {j}" for i, j in self.cells()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BipartiteMatrix":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        beta, gamma, kappa = (int(x) for x in rows[0])
        cells = [(int(a), int(b)) for a, b in rows[1:]]
        if len(cells) != kappa:
            raise InputError(f"header says {kappa} ones, found {len(cells)}")
        return _matrix_from_cells(beta, gamma, cells)


def _matrix_from_cells(beta: int, gamma: int, cells: Iterable[tuple[int, int]]) -> BipartiteMatrix:
    rows = [0] * beta
    for i, j in cells:
        if not (0 <= i < beta and 0 <= j < gamma):
            raise InputError(f"cell ({i}, {j}) out of range")
        rows[i] |= 1 << j
    return BipartiteMatrix.from_rows(gamma, rows)


def _matrix_from_cell_indices(beta: int, gamma: int, idx: Iterable[int]) -> BipartiteMatrix:
    return _matrix_from_cells(beta, gamma, (divmod(int(c), gamma) for c in idx))


def sample_bipartite_p(beta: int, gamma: int, p: float, seed: SeedSpec) -> BipartiteMatrix:
    if beta < 0 or gamma < 0:
        raise InputError("matrix dimensions must be non-negative")
    return _matrix_from_cell_indices(beta, gamma, _bernoulli_indices(beta * gamma, p, seed).tolist())


def sample_bipartite_fixed(beta: int, gamma: int, kappa: int, seed: SeedSpec) -> BipartiteMatrix:
    """Uniform beta x gamma 0-1 matrix with exactly kappa ones."""
    if beta < 0 or gamma < 0:
        raise InputError("matrix dimensions must be non-negative")
    if not 0 <= kappa <= beta * gamma:
        raise InputError(f"kappa={kappa} outside [0, {beta * gamma}]")
    return _matrix_from_cell_indices(beta, gamma, _partial_fisher_yates(beta * gamma, kappa, seed))
