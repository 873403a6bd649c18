"""Invariant batteries behind `gnmalpha verify <suite>`.

Each suite returns a VerifyReport; failures carry the offending case so the
CLI can serialise it.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .enumeration import count_min2_matrices, local_clt, solve_lambda_c, sum_prob_exact
from .extended import max_extended_order
from .graph import Graph, InputError
from .prediction import (
    Params, chernoff_hyper, hyper_tail_exact, janson_exact_p0, janson_variant_bound,
    k_vanilla, r0_argmax, ratio_suite,
)
from .rng import SeedSpec
from .solver import alpha_bruteforce

SUITES = ("lemma1", "enum-dp", "bounds", "ratios", "clt", "janson")


@dataclass
class VerifyReport:
    suite: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    seconds: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def all_graphs(n: int):
    """Every labelled graph on n vertices, in edge-mask order."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for i, (u, v) in enumerate(pairs):
            if mask >> i & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        yield Graph.from_rows(rows)


def lemma1(n: int = 6) -> VerifyReport:
    rep = VerifyReport("lemma1")
    for g in all_graphs(n):
        rep.cases += 1
        a = alpha_bruteforce(g).alpha
        k, _ = max_extended_order(g)
        if k != a:
            rep.failures.append({"edges": g.edges(), "alpha": a, "extended": k})
    return rep


def brute_min2_counts(beta: int, gamma: int) -> np.ndarray:
    """Counts by number of ones over all 2^(beta*gamma) matrices with row sums >= 2."""
    cells = beta * gamma
    masks = np.arange(1 << cells, dtype=np.uint32)
    table = np.array([bin(i).count("1") for i in range(1 << gamma)], dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    ones = np.zeros(len(masks), dtype=np.int64)
    for i in range(beta):
        row = table[(masks >> np.uint32(i * gamma)) & np.uint32((1 << gamma) - 1)]
        ok &= row >= 2
        ones += row
    return np.bincount(ones[ok], minlength=cells + 1)


def topdown_count(beta: int, gamma: int, kappa: int) -> int:
    """C(beta,gamma,kappa) = sum_d C(gamma,d) C(beta-1,gamma,kappa-d), memoised."""

    @lru_cache(maxsize=None)
    def go(b: int, k: int) -> int:
        if b == 0:
            return int(k == 0)
        if k < 2 * b:
            return 0
        return sum(math.comb(gamma, d) * go(b - 1, k - d) for d in range(2, min(gamma, k) + 1))

    return go(beta, kappa)


def enum_dp(max_cells: int = 20) -> VerifyReport:
    rep = VerifyReport("enum-dp")
    for beta in range(1, max_cells + 1):
        for gamma in range(1, max_cells // beta + 1):
            brute = brute_min2_counts(beta, gamma)
            for kappa in range(beta * gamma + 1):
                rep.cases += 1
                got = count_min2_matrices(beta, gamma, kappa).exact_count
                rec = topdown_count(beta, gamma, kappa)
                if got != int(brute[kappa]) or rec != got:
                    rep.failures.append({"beta": beta, "gamma": gamma, "kappa": kappa,
                                         "dp": got, "brute": int(brute[kappa]), "recurrence": rec})
    return rep


def hyper_grid(count: int = 200, amax: int = 60, seed: int = 2024):
    """Deterministic (a, b, c, t, tail) cases; lower-tail t stays within mu."""
    st = SeedSpec(seed, 0).stream()
    out = []
    while len(out) < count:
        a = 1 + st.randbelow(amax)
        b = st.randbelow(a + 1)
        c = st.randbelow(a + 1)
        mu = b * c / a
        tail = "upper" if len(out) % 2 == 0 or mu == 0 else "lower"
        span = b if tail == "upper" else mu
        t = span * st.random()
        out.append((a, b, c, t, tail))
    return out


def bounds(count: int = 200) -> VerifyReport:
    rep = VerifyReport("bounds")
    for a, b, c, t, tail in hyper_grid(count):
        rep.cases += 1
        exact = float(hyper_tail_exact(a, b, c, t, tail))
        bound = chernoff_hyper(a, b, c, t, tail)
        if exact > bound:
            rep.failures.append({"a": a, "b": b, "c": c, "t": t, "tail": tail, "exact": exact, "bound": bound})
    return rep


def janson(max_N: int = 3) -> VerifyReport:
    rep = VerifyReport("janson")
    for N in range(1, max_N + 1):
        for t in (0, 1, 2):
            if t > 2 * N:
                continue
            for p10 in range(1, 10):
                p = p10 / 10
                bound = janson_variant_bound(N, t, p)[2]
                for tA in range(0, min(t, N) + 1):
                    tB = t - tA
                    if tB > N:
                        continue
                    rep.cases += 1
                    exact = janson_exact_p0(N, tA, tB, p)
                    if exact > bound * (1 + 1e-12):
                        rep.failures.append({"N": N, "t": t, "tA": tA, "p": p, "exact": exact, "bound": bound})
    return rep


def clt(beta: int = 500, cs=(4, 6, 8), tol: float = 0.05) -> VerifyReport:
    rep = VerifyReport("clt")
    for c in cs:
        rep.cases += 1
        lam = solve_lambda_c(c)
        got = sum_prob_exact(beta, lam, int(round(c * beta)))
        want = local_clt(beta, c)
        rep.info[str(c)] = got / want
        if abs(got / want - 1) > tol:
            rep.failures.append({"beta": beta, "c": c, "exact": got, "clt": want})
    return rep


RATIO_ROWS = ("N_k", "N_r", "U_k", "U_r", "phi_k", "phi_r", "X_k", "X_r", "X_m")


def ratio_table(ns=(10**5, 10**6, 10**7)) -> dict:
    """rel_err per (r-label, row, n), r in {0, r0} at k = k_V, m = ceil(n^1.3)."""
    out = {}
    for n in ns:
        par = Params(n, math.ceil(n**1.3))
        kv = k_vanilla(par)
        for lab, r in (("0", 0), ("r0", r0_argmax(par, kv))):
            for name, row in ratio_suite(par, kv, r).items():
                out.setdefault(lab, {}).setdefault(name, {})[n] = row.rel_err
    return out


def ratios(ns=(10**5, 10**6, 10**7), tol: float = 0.05) -> VerifyReport:
    rep = VerifyReport("ratios")
    table = ratio_table(ns)
    rep.info["rel_err"] = {lab: {k: {str(n): v for n, v in d.items()} for k, d in rows.items()}
                           for lab, rows in table.items()}
    top = max(ns)
    for lab, rows in table.items():
        for name in RATIO_ROWS:
            errs = [rows[name][n] for n in ns]
            rep.cases += 1
            if name == "N_r":
                if max(errs) > 1e-9:
                    rep.failures.append({"r": lab, "row": name, "rel_err": errs, "why": "not exact"})
                continue
            if errs[-1] > tol:
                rep.failures.append({"r": lab, "row": name, "rel_err": errs, "why": f"> {tol} at n={top}"})
            elif any(b >= a for a, b in zip(errs, errs[1:])):
                rep.failures.append({"r": lab, "row": name, "rel_err": errs, "why": "not decreasing in n"})
    return rep


def run_suite(name: str) -> VerifyReport:
    fns = {"lemma1": lemma1, "enum-dp": enum_dp, "bounds": bounds, "ratios": ratios,
           "clt": clt, "janson": janson}
    if name not in fns:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t = time.perf_counter()
    rep = fns[name]()
    rep.seconds = time.perf_counter() - t
    return rep
