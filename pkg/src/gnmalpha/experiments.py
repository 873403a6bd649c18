"""Seeded Monte-Carlo experiments: alpha concentration and the X_{k,r} moment check."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .enumeration import phi_exact_mixture
from .extended import count_x
from .graph import InputError, sample_gnm
from .prediction import N_pairs, Params, U_prob, k_zero
from .rng import SeedSpec
from .solver import BudgetExceeded, alpha_exact


@dataclass
class TrialRow:
    trial: int
    seed: int
    alpha: int | None
    nodes: int
    status: str


def _alpha_trial(args) -> TrialRow:
    n, m, master, t, budget = args
    g = sample_gnm(n, m, SeedSpec(master, t))
    try:
        res = alpha_exact(g, budget)
    except BudgetExceeded as e:
        return TrialRow(t, master, None, e.nodes, "budget")
    return TrialRow(t, master, res.alpha, res.nodes_explored, "ok")


@dataclass
class ConcentrationSummary:
    n: int
    m: int
    eps: float
    trials: int
    seed: int
    k0: int
    interval: list[int]
    pmf: dict[str, float]
    coverage: float
    support: list[int]
    support_width: int
    median: float | None
    median_offset: float | None
    failures: int
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def summarise(rows: list[TrialRow], n: int, m: int, eps: float, seed: int, k0: int) -> ConcentrationSummary:
    vals = [r.alpha for r in rows if r.status == "ok"]
    cnt = Counter(vals)
    total = len(vals)
    pmf = {str(a): cnt[a] / total for a in sorted(cnt)} if total else {}
    interval = [k0 - 1, k0]
    cov = sum(cnt[a] for a in interval) / total if total else 0.0
    support = sorted(cnt)
    width = support[-1] - support[0] + 1 if support else 0
    med = statistics.median(vals) if vals else None
    return ConcentrationSummary(
        n=n, m=m, eps=eps, trials=len(rows), seed=seed, k0=k0, interval=interval, pmf=pmf,
        coverage=cov, support=support, support_width=width, median=med,
        median_offset=None if med is None else med - k0,
        failures=len(rows) - total,
        notes=["acceptance band (width <= 4, median within 2 of k0) is a calibration choice"],
    )


def run_concentration(n: int, m: int, trials: int, seed: int, budget: int,
                      eps: float = 0.1, workers: int = 1) -> tuple[ConcentrationSummary, list[TrialRow]]:
    """alpha(G(n,m)) over trials; trial t uses stream (seed, t)."""
    if trials < 1:
        raise InputError("need trials >= 1")
    par = Params(n, m, eps)
    k0 = k_zero(par)
    jobs = [(n, m, seed, t, budget) for t in range(trials)]
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_alpha_trial, jobs))
    else:
        rows = [_alpha_trial(j) for j in jobs]
    rows.sort(key=lambda r: r.trial)
    summary = summarise(rows, n, m, eps, seed, k0)
    summary.seconds = time.perf_counter() - t0
    return summary, rows


def trials_csv(rows: list[TrialRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "seed", "alpha", "nodes", "status"])
    for r in rows:
        w.writerow([r.trial, r.seed, "" if r.alpha is None else r.alpha, r.nodes, r.status])
    return buf.getvalue()


@dataclass
class MomentReport:
    n: int
    m: int
    k: int
    r: int
    trials: int
    seed: int
    mc_mean: float
    std_err: float
    exact: float
    z: float | None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def exact_xkr(n: int, m: int, k: int, r: int) -> float:
    """N(k,r) U(m,k,r) Phi with Phi from the exact hypergeometric mixture."""
    par = Params(n, m)
    u = U_prob(par, k, r)
    if u.zero:
        return 0.0
    return (N_pairs(n, k, r) * u).value() * float(phi_exact_mixture(n, m, k, r))


def run_xkr(n: int, m: int, k: int, r: int, trials: int, seed: int) -> MomentReport:
    """Monte-Carlo mean of X_{k,r} over G(n,m) against the exact expectation."""
    if not 0 <= r <= k:
        raise InputError("need 0 <= r <= k")
    if k + r > n:
        raise InputError("need k + r <= n")
    if n > 12:
        raise InputError("exhaustive per-trial counting limited to n <= 12")
    if trials < 2:
        raise InputError("need at least two trials for a standard error")
    s = s2 = 0.0
    for t in range(trials):
        x = count_x(sample_gnm(n, m, SeedSpec(seed, t)), k, r)
        s += x
        s2 += x * x
    mean = s / trials
    var = max(0.0, (s2 - trials * mean * mean) / (trials - 1))
    se = math.sqrt(var / trials)
    ex = exact_xkr(n, m, k, r)
    z = (mean - ex) / se if se > 0 else None
    return MomentReport(n, m, k, r, trials, seed, mean, se, ex, z)
