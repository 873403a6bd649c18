"""Counting 0-1 matrices whose rows all have at least two ones.

Rows of a beta x gamma matrix are the vertices outside K, columns the isolated
vertices of K.  C(beta, gamma, kappa) counts matrices with kappa ones and every
row sum >= 2:

    C(beta, gamma, kappa) = [x^kappa] (sum_{d>=2} C(gamma, d) x^d)^beta

and f = C / C(beta*gamma, kappa).  The row-sum distribution is governed by a
Poisson law truncated to {2, 3, ...}; its rate lambda_c is fixed by mean c.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import InputError
from .lognum import NEG_INF, LogNumber
from .prediction import _lbinom, m1_pairs
from .rng import SeedSpec, Stream

EXACT_BUDGET = 2 * 10**6  # beta * gamma * kappa above this -> log-float
TAIL_MASS = 1e-15


# ---------------------------------------------------------------- truncated Poisson


def _norm(lam: float) -> float:
    """e^lam - lam - 1 without cancellation."""
    if lam < 0.5:
        term, s = lam * lam / 2, 0.0
        j = 2
        while term > 1e-20 * (s + term):
            s += term
            j += 1
            term *= lam / j
        return s + term
    return math.expm1(lam) - lam


def _check_lam(lam: float) -> None:
    if not lam > 0:
        raise InputError(f"lambda must be positive, got {lam}")


def trunc_pmf(lam: float, j: int) -> float:
    _check_lam(lam)
    if j < 2:
        return 0.0
    if lam > 700:
        # normaliser ~ e^lam
        lognorm = lam + math.log1p(-(lam + 1) * math.exp(-lam))
    else:
        lognorm = math.log(_norm(lam))
    return math.exp(j * math.log(lam) - math.lgamma(j + 1) - lognorm)


def trunc_mean(lam: float) -> float:
    """lam (e^lam - 1) / (e^lam - lam - 1)."""
    _check_lam(lam)
    if lam < 1:
        return lam * math.expm1(lam) / _norm(lam)
    q = math.exp(-lam)
    return lam * (1 - q) / (1 - (lam + 1) * q)


def solve_lambda_c(c: float) -> float:
    """The rate whose truncated mean is c, by bisection on [1e-9, c]."""
    if not c > 2:
        raise InputError(f"need c > 2 (the truncated mean is always above 2), got {c}")
    lo, hi = 1e-9, float(c)
    while trunc_mean(hi) <= c:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = trunc_mean(mid)
        if abs(val - c) <= 1e-13:
            return mid
        if val < c:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * math.ulp(hi):
            break
    return 0.5 * (lo + hi)


def eta_bar(c: float) -> float:
    """lam e^lam / (e^lam - 1) at lam = lambda_c."""
    lam = solve_lambda_c(c)
    return lam / -math.expm1(-lam)


@dataclass(frozen=True)
class TruncPoisson:
    lam: float

    def __post_init__(self):
        _check_lam(self.lam)

    def pmf(self, j: int) -> float:
        return trunc_pmf(self.lam, j)

    @property
    def mean(self) -> float:
        return trunc_mean(self.lam)

    @property
    def eta_bar(self) -> float:
        return self.lam / -math.expm1(-self.lam)

    def support(self, tail: float = TAIL_MASS) -> tuple[np.ndarray, float]:
        """pmf on 0..J with the mass beyond J below ``tail``; also the discarded mass."""
        vals = [0.0, 0.0]
        acc = 0.0
        j = 2
        while True:
            v = self.pmf(j)
            vals.append(v)
            acc += v
            if j > self.lam and 1 - acc < tail:
                break
            j += 1
        return np.array(vals), max(0.0, 1 - math.fsum(vals))

    def sample(self, stream: Stream) -> int:
        return sample_trunc_poisson(self.lam, stream)


def sample_trunc_poisson(lam: float, seed: Stream | SeedSpec) -> int:
    """Inversion by cumulative scan from j = 2."""
    _check_lam(lam)
    stream = seed.stream() if isinstance(seed, SeedSpec) else seed
    u = stream.random()
    j, cdf = 2, 0.0
    while True:
        pj = trunc_pmf(lam, j)
        cdf += pj
        # u can exceed the float cdf by rounding; stop once the pmf has vanished
        if u < cdf or (pj == 0.0 and j > lam):
            return j
        j += 1


# ---------------------------------------------------------------- matrix counts


@dataclass
class EnumResult:
    beta: int
    gamma: int
    kappa: int
    log_C: float
    log_f: float
    mode: str
    exact_count: int | None = None
    note: str = ""

    @property
    def c(self) -> float:
        return self.kappa / self.beta

    @property
    def count_C(self) -> int | LogNumber:
        return self.exact_count if self.exact_count is not None else LogNumber(self.log_C)

    @property
    def f(self) -> float:
        return LogNumber(self.log_f).value()

    def f_exact(self) -> Fraction:
        if self.exact_count is None:
            raise InputError("no exact count in log-float mode")
        return Fraction(self.exact_count, math.comb(self.beta * self.gamma, self.kappa))

    def to_dict(self) -> dict:
        fin = lambda x: None if x == NEG_INF else x
        return {
            "beta": self.beta, "gamma": self.gamma, "kappa": self.kappa, "c": self.c,
            "log_C": fin(self.log_C), "log_f": fin(self.log_f), "mode": self.mode,
            "count_C": None if self.exact_count is None else str(self.exact_count),
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _check_shape(beta: int, gamma: int, kappa: int) -> None:
    if beta < 1 or gamma < 1:
        raise InputError("need beta, gamma >= 1")
    if not 0 <= kappa <= beta * gamma:
        raise InputError(f"kappa={kappa} outside [0, {beta * gamma}]")


def min2_coefficients(beta: int, gamma: int, kmax: int) -> list[int]:
    """C(beta, gamma, kappa) for kappa = 0..kmax, exact, row by row."""
    w = [(d, math.comb(gamma, d)) for d in range(2, gamma + 1)]
    cur = [1] + [0] * kmax
    for _ in range(beta):
        nxt = [0] * (kmax + 1)
        for i, a in enumerate(cur):
            if a:
                for d, b in w:
                    if i + d > kmax:
                        break
                    nxt[i + d] += a * b
        cur = nxt
    return cur


def _tilt(gamma: int, c: float) -> float:
    """ln x0 with sum d C(g,d) x0^d / sum C(g,d) x0^d = c over d >= 2."""
    d = np.arange(2, gamma + 1)
    lw = np.array([_lbinom(gamma, int(x)) for x in d])

    def mean(t):
        z = lw + d * t
        z = np.exp(z - z.max())
        return float((d * z).sum() / z.sum())

    lo, hi = -50.0, 50.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mean(mid) < c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_count_float(beta: int, gamma: int, kappa: int) -> float:
    """ln C(beta, gamma, kappa) by a scaled float convolution.

    The row polynomial is tilted so that kappa sits near the mode of the
    product, which keeps the wanted coefficient far from underflow.
    """
    c = kappa / beta
    t = _tilt(gamma, c) if 2 < c < gamma else 0.0
    d = np.arange(2, gamma + 1)
    lw = np.array([_lbinom(gamma, int(x)) for x in d]) + d * t
    top = lw.max()
    w = np.concatenate([[0.0, 0.0], np.exp(lw - top)])
    cur = np.zeros(kappa + 1)
    cur[0] = 1.0
    scale = 0.0
    for _ in range(beta):
        cur = np.convolve(cur, w)[: kappa + 1]
        mx = cur.max()
        if mx == 0:
            return NEG_INF
        cur /= mx
        scale += math.log(mx) + top
    if cur[kappa] == 0:
        return NEG_INF
    return math.log(cur[kappa]) + scale - kappa * t


def count_min2_matrices(beta: int, gamma: int, kappa: int, budget: int = EXACT_BUDGET,
                        mode: str | None = None) -> EnumResult:
    """C(beta, gamma, kappa) and f; exact integers within budget, else log-float."""
    _check_shape(beta, gamma, kappa)
    log_total = _lbinom(beta * gamma, kappa)
    if kappa < 2 * beta or gamma < 2:
        return EnumResult(beta, gamma, kappa, NEG_INF, NEG_INF, "exact-int", 0)
    want = mode or ("exact-int" if beta * gamma * kappa <= budget else "log-float")
    note = ""
    if want == "log-float" and mode is None:
        note = f"beta*gamma*kappa = {beta * gamma * kappa} exceeds exact budget {budget}"
    if want == "exact-int":
        cnt = min2_coefficients(beta, gamma, kappa)[kappa]
        lc = math.log(cnt) if cnt else NEG_INF
        return EnumResult(beta, gamma, kappa, lc, lc - log_total if cnt else NEG_INF, want, cnt, note)
    if want != "log-float":
        raise InputError(f"unknown mode {want!r}")
    lc = _log_count_float(beta, gamma, kappa)
    return EnumResult(beta, gamma, kappa, lc, lc - log_total if lc > NEG_INF else NEG_INF, want, None, note)


@dataclass(frozen=True)
class MainTerm:
    log_value: float
    secondary: float  # e^{-2c}, the size of the correction inside each row factor

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def f_main_term(beta: int, kappa: int) -> MainTerm:
    """(1 - (c+1) e^{-c})^beta with c = kappa/beta, in log space."""
    if kappa < 2 * beta:
        raise InputError("need kappa >= 2 beta")
    c = kappa / beta
    return MainTerm(beta * math.log1p(-(c + 1) * math.exp(-c)), math.exp(-2 * c))


# ---------------------------------------------------------------- local limit


def sum_prob_exact(beta: int, lam: float, kappa: int) -> float:
    """P(chi_1 + ... + chi_beta = kappa) for iid truncated Poissons, by convolution."""
    if beta < 1:
        raise InputError("need beta >= 1")
    if kappa < 0:
        return 0.0
    pmf, _ = TruncPoisson(lam).support()
    pmf = pmf[: kappa + 1]
    cur = np.zeros(kappa + 1)
    cur[0] = 1.0
    for _ in range(beta):
        cur = np.convolve(cur, pmf)[: kappa + 1]
    return float(cur[kappa])


def local_clt(beta: int, c: float) -> float:
    """1 / sqrt(2 pi kappa (1 + eta_bar_c - c)), kappa = c beta."""
    kappa = c * beta
    return 1 / math.sqrt(2 * math.pi * kappa * (1 + eta_bar(c) - c))


# ---------------------------------------------------------------- exact Phi


def phi_exact_mixture(n: int, m: int, k: int, r: int, budget: int = EXACT_BUDGET) -> Fraction:
    """P(every outside vertex has two neighbours among the k - r isolated vertices | U).

    Given U the remaining m - r edges are uniform over the T - M1 free pairs;
    kappa of them fall in the beta x gamma block (hypergeometric), and the block
    is then a uniform kappa-subset, good with probability f(beta, gamma, kappa).
    """
    if not 0 <= r <= k or k + r > n:
        raise InputError("need 0 <= r <= k and k + r <= n")
    T = n * (n - 1) // 2
    M1 = m1_pairs(k, r)
    free, draws = T - M1, m - r
    if draws < 0 or M1 > T or draws > free:
        raise InputError("the conditioning event has probability zero")
    beta, gamma = n - k - r, k - r
    if beta == 0:
        return Fraction(1)
    A = beta * gamma
    top = min(A, draws)
    if beta * gamma * top > budget:
        raise InputError(f"beta*gamma*kappa = {beta * gamma * top} exceeds exact budget {budget}")
    coef = min2_coefficients(beta, gamma, top) if gamma >= 2 else [0] * (top + 1)
    # C(A,kappa) f = coef[kappa]
    num = sum(coef[x] * math.comb(free - A, draws - x) for x in range(top + 1))
    return Fraction(num, math.comb(free, draws))


def g_and_eta(gamma: int, degrees) -> tuple[LogNumber, float]:
    """g(d) = prod C(gamma, d_i) and eta(d) = sum d_i (d_i - 1) / kappa (0 when kappa = 0)."""
    degrees = [int(x) for x in degrees]
    for x in degrees:
        if not 0 <= x <= gamma:
            raise InputError(f"degree {x} outside [0, {gamma}]")
    g = LogNumber(math.fsum(math.log(math.comb(gamma, x)) for x in degrees))
    kappa = sum(degrees)
    eta = sum(x * (x - 1) for x in degrees) / kappa if kappa else 0.0
    return g, eta
