"""Exact maximum independent set.

Maximum independent sets of G are maximum cliques of the complement, so the
search is a clique-style branch and bound run directly on G:

* vertices with at most one neighbour in the candidate set P are taken outright;
* P is covered greedily by cliques of G (lowest index first), and a cover with
  q cliques bounds the independent sets inside P by q; vertices that would open
  a class past the pruning threshold are first re-inserted into earlier
  classes where possible (Re-NUMBER);
* cover classes past the threshold are tested by failed-literal unit
  propagation (a MaxSAT-style bound): a class all of whose vertices lead to a
  conflict with earlier classes cannot raise the bound and is not branched on;
  conflict analysis keeps only the classes a conflict depends on;
* the remaining vertices are branched on, last cover class first;
* vertices are relabelled beforehand in degeneracy order (repeatedly move a
  maximum-degree vertex of the remaining graph to the end, lowest index first
  on ties), and a greedy minimum-degree independent set seeds the incumbent.

The kernel is compiled with numba and works on uint64 word arrays.  Every tie
is broken by vertex index, so results and node counts are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numba as nb
import numpy as np
from llvmlite import ir
from numba.extending import intrinsic

from .graph import Graph, InputError, bits_of, iter_bits

DEFAULT_BUDGET = 10**9
BRUTEFORCE_MAX_N = 26


class BudgetExceeded(RuntimeError):
    """Node budget exhausted before optimality was proved."""

    def __init__(self, nodes: int, best: frozenset[int]):
        super().__init__(f"node budget exhausted after {nodes} nodes (best found {len(best)})")
        self.nodes = nodes
        self.best = best
        self.lower_bound = len(best)


@dataclass(frozen=True)
class AlphaResult:
    alpha: int
    witness: frozenset[int] = field(default_factory=frozenset)
    nodes_explored: int = 0


@intrinsic
def _ctpop(typingctx, x):
    sig = nb.types.uint64(nb.types.uint64)

    def codegen(context, builder, signature, args):
        return builder.ctpop(args[0])

    return sig, codegen


@intrinsic
def _cttz(typingctx, x):
    sig = nb.types.uint64(nb.types.uint64)

    def codegen(context, builder, signature, args):
        return builder.cttz(args[0], ir.Constant(ir.IntType(1), 1))

    return sig, codegen


@nb.njit(cache=True, inline="always")
def _popcount(x):
    return int(_ctpop(x))


@nb.njit(cache=True, inline="always")
def _lowbit(x):
    # index of the lowest set bit of a nonzero word
    return int(_cttz(x))


@nb.njit(cache=True)
def _first(s, W):
    for w in range(W):
        if s[w]:
            return w * 64 + _lowbit(s[w])
    return -1


@nb.njit(cache=True)
def _fits(cls, i, adj, v, W):
    for w in range(W):
        if cls[i, w] & ~adj[v, w]:
            return False
    return True


@nb.njit(cache=True)
def _cover(P, adj, n, W, cls, kmin, U, Q, owner):
    """Greedy clique cover of P into rows of cls; returns the class count.

    Classes are grown one at a time from the lowest remaining index.  Once
    kmin classes exist, each leftover vertex v is first offered to an early
    class i < kmin in which it conflicts with a single vertex u only; if u
    fits a later class j < kmin, u moves there and v takes its place.
    """
    for w in range(W):
        U[w] = P[w]
    K = 0
    while K < kmin:
        v = _first(U, W)
        if v < 0:
            return K
        _grow(U, Q, adj, W, cls, K, owner)
        K += 1
    for w0 in range(W):
        x = U[w0]
        while x:
            b = _lowbit(x)
            x &= x - np.uint64(1)
            v = w0 * 64 + b
            bit = np.uint64(1) << np.uint64(b)
            for i in range(kmin):
                u = -1
                cnt = 0
                for w in range(W):
                    c = cls[i, w] & ~adj[v, w]
                    if c:
                        cnt += _popcount(c)
                        u = w * 64 + _lowbit(c)
                if cnt != 1:
                    continue
                # a class u fits in holds only neighbours of u, so scan those
                j = kmin
                for w in range(W):
                    y = adj[u, w] & P[w]
                    while y:
                        oc = owner[w * 64 + _lowbit(y)]
                        y &= y - np.uint64(1)
                        if i < oc < j and _fits(cls, oc, adj, u, W):
                            j = oc
                moved = False
                if j < kmin:
                    ub = np.uint64(1) << np.uint64(u & 63)
                    cls[i, u >> 6] &= ~ub
                    cls[j, u >> 6] |= ub
                    cls[i, w0] |= bit
                    U[w0] &= ~bit
                    owner[u] = j
                    owner[v] = i
                    moved = True
                if moved:
                    break
    while _first(U, W) >= 0:
        _grow(U, Q, adj, W, cls, K, owner)
        K += 1
    return K


@nb.njit(cache=True)
def _grow(U, Q, adj, W, cls, K, owner):
    # one maximal clique of U, lowest index first, moved from U into cls[K]
    for w in range(W):
        Q[w] = U[w]
        cls[K, w] = 0
    while True:
        v = _first(Q, W)
        if v < 0:
            break
        bit = np.uint64(1) << np.uint64(v & 63)
        cls[K, v >> 6] |= bit
        owner[v] = K
        U[v >> 6] &= ~bit
        for w in range(W):
            Q[w] &= adj[v, w]


@nb.njit(cache=True)
def _failed(v, cls, usable, nuse, adj, W, rem, removed, involved, alive, plist, psrc, unitv, stack):
    """Unit propagation after choosing v, over the classes listed in usable.

    Returns True on conflict.  involved[t] then marks the classes (positions
    in usable) that the conflict derivation actually depends on.
    """
    for w in range(W):
        removed[w] = adj[v, w]
    removed[v >> 6] |= np.uint64(1) << np.uint64(v & 63)
    plist[0] = v
    psrc[0] = -1
    npl = 1
    for t in range(nuse):
        i = usable[t]
        involved[t] = False
        alive[t] = True
        unitv[t] = -1
        for w in range(W):
            rem[t, w] = cls[i, w]
    changed = True
    while changed:
        changed = False
        for t in range(nuse):
            if not alive[t]:
                continue
            cnt = 0
            for w in range(W):
                r = rem[t, w] & ~removed[w]
                rem[t, w] = r
                cnt += _popcount(r)
            if cnt == 0:
                _explain(t, cls, usable, adj, W, involved, plist, psrc, npl, unitv, stack)
                return True
            if cnt == 1:
                u = _first(rem[t], W)
                for w in range(W):
                    removed[w] |= adj[u, w]
                removed[u >> 6] |= np.uint64(1) << np.uint64(u & 63)
                plist[npl] = u
                psrc[npl] = t
                npl += 1
                unitv[t] = u
                alive[t] = False
                changed = True
    return False


@nb.njit(cache=True)
def _explain(t0, cls, usable, adj, W, involved, plist, psrc, npl, unitv, stack):
    # walk back from the emptied class: each removed vertex is blamed on the
    # earliest propagated vertex adjacent to it, whose class joins the set
    involved[t0] = True
    stack[0] = t0
    top = 1
    while top:
        top -= 1
        c = stack[top]
        i = usable[c]
        for w in range(W):
            x = cls[i, w]
            while x:
                b = _lowbit(x)
                x &= x - np.uint64(1)
                y = w * 64 + b
                if y == unitv[c]:
                    continue
                bit = np.uint64(1) << np.uint64(b)
                for q in range(npl):
                    if adj[plist[q], w] & bit:
                        s = psrc[q]
                        if s >= 0 and not involved[s]:
                            involved[s] = True
                            stack[top] = s
                            top += 1
                        break


@nb.njit(cache=True)
def _expand(size, adj, n, W, cur, best, bestset, state, ws_P, ws_cls, ws_branch, sc_flags, sc_idx, rem, removed):
    # state: [nodes, budget, aborted]; ws_* rows are per depth, sc_* is shared
    # scratch that is dead once the node starts branching
    state[0] += 1
    if state[0] > state[1]:
        state[2] = 1
        return
    P = ws_P[size]
    # a vertex with at most one neighbour left belongs to some maximum set
    reduced = True
    while reduced:
        reduced = False
        for w0 in range(W):
            x = P[w0]
            while x:
                b = _lowbit(x)
                x &= x - np.uint64(1)
                v = w0 * 64 + b
                d = 0
                for w in range(W):
                    d += _popcount(adj[v, w] & P[w])
                if d <= 1:
                    cur[size] = v
                    size += 1
                    P[w0] &= ~(np.uint64(1) << np.uint64(b))
                    for w in range(W):
                        P[w] &= ~adj[v, w]
                    x &= P[w0]
                    reduced = True
    if _first(P, W) < 0:
        if size > best[0]:
            best[0] = size
            for t in range(size):
                bestset[t] = cur[t]
        return
    cls = ws_cls[size]
    branch = ws_branch[size]
    kmin = best[0] - size
    K = _cover(P, adj, n, W, cls, kmin, removed, rem[0], sc_idx[5])
    if K <= kmin:
        return
    if kmin <= 0:
        for j in range(K):
            branch[j] = True
    else:
        used = sc_flags[0]
        involved = sc_flags[1]
        inv_acc = sc_flags[2]
        alive = sc_flags[3]
        usable = sc_idx[0]
        plist = sc_idx[1]
        psrc = sc_idx[2]
        unitv = sc_idx[3]
        stack = sc_idx[4]
        for j in range(K):
            used[j] = False
            branch[j] = False
        nuse = kmin
        for i in range(kmin):
            usable[i] = i
        for j in range(kmin, K):
            for t in range(nuse):
                inv_acc[t] = False
            allfail = True
            for w in range(W):
                x = cls[j, w]
                while x:
                    b = _lowbit(x)
                    x &= x - np.uint64(1)
                    if not _failed(w * 64 + b, cls, usable, nuse, adj, W, rem, removed, involved, alive,
                                   plist, psrc, unitv, stack):
                        allfail = False
                        break
                    for t in range(nuse):
                        if involved[t]:
                            inv_acc[t] = True
                if not allfail:
                    break
            if allfail:
                # the conflicting classes are spent; j itself becomes usable
                keep = 0
                for t in range(nuse):
                    if not inv_acc[t]:
                        usable[keep] = usable[t]
                        keep += 1
                nuse = keep
            else:
                branch[j] = True
    Pc = P
    NP = ws_P[size + 1]
    for j in range(K - 1, -1, -1):
        if not branch[j]:
            continue
        for w in range(W):
            x = cls[j, w]
            while x:
                b = _lowbit(x)
                x &= x - np.uint64(1)
                v = w * 64 + b
                bit = np.uint64(1) << np.uint64(b)
                empty = True
                for ww in range(W):
                    NP[ww] = Pc[ww] & ~adj[v, ww]
                    if ww == w:
                        NP[ww] &= ~bit
                    if NP[ww]:
                        empty = False
                cur[size] = v
                if empty:
                    if size + 1 > best[0]:
                        best[0] = size + 1
                        for t in range(size + 1):
                            bestset[t] = cur[t]
                else:
                    _expand(size + 1, adj, n, W, cur, best, bestset, state, ws_P, ws_cls, ws_branch,
                            sc_flags, sc_idx, rem, removed)
                    if state[2]:
                        return
                Pc[w] &= ~bit


def _degeneracy_order(g: Graph) -> list[int]:
    deg = [g.degree(v) for v in range(g.n)]
    alive = [True] * g.n
    tail = []
    for _ in range(g.n):
        v = max((u for u in range(g.n) if alive[u]), key=lambda u: (deg[u], -u))
        alive[v] = False
        tail.append(v)
        for u in iter_bits(g.adj[v]):
            deg[u] -= 1
    return tail[::-1]


def greedy_independent_set(g: Graph) -> list[int]:
    """Repeatedly take a minimum-degree vertex (lowest index) and drop its neighbours."""
    P = (1 << g.n) - 1
    out = []
    while P:
        v = min(iter_bits(P), key=lambda u: ((g.adj[u] & P).bit_count(), u))
        out.append(v)
        P &= ~(g.adj[v] | (1 << v))
    return out


def _word_matrix(rows: list[int], W: int) -> np.ndarray:
    a = np.zeros((len(rows), W), np.uint64)
    for i, row in enumerate(rows):
        for w in range(W):
            a[i, w] = (row >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return a


def alpha_exact(g: Graph, budget: int = DEFAULT_BUDGET) -> AlphaResult:
    n = g.n
    if n == 0:
        return AlphaResult(0, frozenset(), 0)
    order = _degeneracy_order(g)
    pos = {v: i for i, v in enumerate(order)}
    rows = [bits_of(pos[u] for u in iter_bits(g.adj[v])) for v in order]
    W = (n + 63) // 64
    adj = _word_matrix(rows, W)
    greedy = greedy_independent_set(g)
    best = np.array([len(greedy)], np.int64)
    bestset = np.full(n, -1, np.int64)
    state = np.array([0, budget, 0], np.int64)
    ws_P = np.zeros((n + 2, W), np.uint64)
    ws_P[0] = _word_matrix([(1 << n) - 1], W)[0]
    ws_cls = np.zeros((n + 1, n, W), np.uint64)
    ws_branch = np.zeros((n + 1, n), np.bool_)
    sc_flags = np.zeros((4, n + 1), np.bool_)
    sc_idx = np.zeros((6, n + 1), np.int64)
    _expand(0, adj, n, W, np.zeros(n + 1, np.int64), best, bestset, state, ws_P, ws_cls, ws_branch,
            sc_flags, sc_idx, np.zeros((n + 1, W), np.uint64), np.zeros(W, np.uint64))
    k = int(best[0])
    if bestset[0] < 0:
        witness = frozenset(greedy)
    else:
        witness = frozenset(order[int(v)] for v in bestset[:k])
    if state[2]:
        raise BudgetExceeded(budget, witness)
    return AlphaResult(k, witness, int(state[0]))


def alpha_bruteforce(g: Graph) -> AlphaResult:
    """Independence number by enumerating subsets, largest sizes first."""
    if g.n > BRUTEFORCE_MAX_N:
        raise InputError(f"brute force limited to n <= {BRUTEFORCE_MAX_N}")
    adj = g.adj
    for size in range(g.n, 0, -1):
        for combo in combinations(range(g.n), size):
            s = bits_of(combo)
            if all(not (adj[v] & s) for v in combo):
                return AlphaResult(size, frozenset(combo), 0)
    return AlphaResult(0, frozenset(), 0)
