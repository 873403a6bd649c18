"""First-moment predictions for the independence number of G(n, m).

Everything is evaluated in log space.  Notation: T = C(n,2), p = m/T,
K a set of k + r vertices, M a matching of r edges inside K.

    N(k,r)  = C(n,k+r) [k+r]_{2r} / (2^r r!)          ways to choose (K, M)
    M1      = C(k+r,2) - C(2r,2) + r                  pairs fixed by (K, M)
    U(k,r)  = C(T-M1, m-r) / C(T, m)                  M present, rest of G[K] empty
    phi(c)  = exp(-(c+1) e^{-c}),  c = p (k-r)
    X'(k,r) = N U phi(c)^{n-k-r}

Arguments up to 10**4 go through exact integers; larger ones through mpmath
log-gamma at 200 bits, combined before rounding so that ratios of huge
binomials keep their digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .graph import InputError
from .lognum import NEG_INF, LogNumber, log_sum

EXACT_MAX = 10**4
_MP = mpmath.MPContext()
_MP.prec = 200
_LN2 = math.log(2)


@lru_cache(maxsize=1 << 16)
def _lf(x: int):
    """ln x! as a 200-bit mpf."""
    return _MP.loggamma(x + 1)


def _lf_combo(plus, minus) -> float:
    s = _MP.fsum([_lf(x) for x in plus]) - _MP.fsum([_lf(x) for x in minus])
    return float(s)


def _lbinom(a: int, b: int) -> float:
    if b < 0 or b > a or a < 0:
        return NEG_INF
    if a <= EXACT_MAX:
        return math.log(math.comb(a, b))
    return _lf_combo((a,), (b, a - b))


def log_binomial(a: int, b: int) -> LogNumber:
    """ln C(a, b); zero outside 0 <= b <= a."""
    return LogNumber(_lbinom(a, b))


@dataclass(frozen=True)
class Params:
    n: int
    m: int
    eps: float = 0.1

    def __post_init__(self):
        if self.n < 2:
            raise InputError("need n >= 2")
        if not 0 <= self.m <= self.T:
            raise InputError(f"m={self.m} outside [0, {self.T}]")
        if self.eps <= 0:
            raise InputError("eps must be positive")

    @property
    def T(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def p(self) -> float:
        return self.m / self.T

    @property
    def threshold(self) -> float:
        """ln n^eps."""
        return self.eps * math.log(self.n)

    def regime(self) -> dict[str, bool]:
        n, m, e = self.n, self.m, self.eps
        return {
            "main": n ** (1.25 + e) < m < n ** (4 / 3 + e),
            "gnp": self.p > n ** (-0.75 + e),
        }


# ---------------------------------------------------------------- vanilla


def _log_ind(par: Params, k: int) -> float:
    """ln E[# independent k-sets]."""
    if k < 0 or k > par.n:
        return NEG_INF
    T, m = par.T, par.m
    free = T - k * (k - 1) // 2
    if free < m:
        return NEG_INF
    if T <= EXACT_MAX:
        return _lbinom(par.n, k) + _lbinom(free, m) - _lbinom(T, m)
    return _lbinom(par.n, k) + _lf_combo((free, T - m), (free - m, T))


def expected_ind_sets(par: Params, k: int) -> LogNumber:
    return LogNumber(_log_ind(par, k))


def _first_true(lo: int, hi: int, pred) -> int:
    """Smallest x in [lo, hi] with pred(x), pred monotone false->true; hi if none before."""
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def k_vanilla(par: Params) -> int:
    """Smallest k on the decreasing tail of E[# independent k-sets] with value <= n^eps.

    The expectation is log-concave in k, so the mode is found by bisection on
    the sign of consecutive differences and the tail by a second bisection.
    """
    n, thr = par.n, par.threshold
    def past_mode(k):
        here = _log_ind(par, k)
        return here == NEG_INF or _log_ind(par, k + 1) < here

    mode = _first_true(0, n, past_mode)
    return _first_true(mode, n, lambda k: _log_ind(par, k) <= thr)


def k_vanilla_formula(par: Params) -> float:
    """(2/p)(ln np - ln ln np + ln(e/2)), the window centre for k."""
    p = par.p
    L = math.log(par.n * p)
    return 2 / p * (L - math.log(L) + math.log(math.e / 2))


# ---------------------------------------------------------------- N, U, phi, X'


def _check_kr(k: int, r: int) -> None:
    if r < 0 or k < r:
        raise InputError(f"need 0 <= r <= k (k={k}, r={r})")


def _log_n(n: int, k: int, r: int) -> float:
    _check_kr(k, r)
    if k + r > n:
        return NEG_INF
    if n <= EXACT_MAX:
        ways = math.comb(n, k + r) * math.perm(k + r, 2 * r) // (2**r * math.factorial(r))
        return math.log(ways)
    return _lf_combo((n,), (n - k - r, k - r, r)) - r * _LN2


def N_pairs(n: int, k: int, r: int) -> LogNumber:
    return LogNumber(_log_n(n, k, r))


def m1_pairs(k: int, r: int) -> int:
    return (k + r) * (k + r - 1) // 2 - r * (2 * r - 1) + r


def _log_u(n: int, m: int, k: int, r: int) -> float:
    _check_kr(k, r)
    T = n * (n - 1) // 2
    M1 = m1_pairs(k, r)
    if m < r or M1 > T or m - r > T - M1:
        return NEG_INF
    if T <= EXACT_MAX:
        return _lbinom(T - M1, m - r) - _lbinom(T, m)
    return _lf_combo((T - M1, m, T - m), (m - r, T - M1 - m + r, T))


def U_prob(par: Params, k: int, r: int) -> LogNumber:
    return LogNumber(_log_u(par.n, par.m, k, r))


def phi(c: float) -> float:
    if c < 0:
        raise InputError("phi needs c >= 0")
    return math.exp(log_phi(c))


def log_phi(c: float) -> float:
    return -(c + 1) * math.exp(-c)


def c_value(par: Params, k: int, r: int) -> float:
    return par.p * (k - r)


def _log_phipow(par: Params, k: int, r: int, m: int | None = None) -> float:
    p = par.p if m is None else m / par.T
    e = par.n - k - r
    return 0.0 if e == 0 else e * log_phi(p * (k - r))


def _lx(par: Params, k: int, r: int) -> float:
    ln = _log_n(par.n, k, r)
    if ln == NEG_INF:
        return NEG_INF
    lu = _log_u(par.n, par.m, k, r)
    if lu == NEG_INF:
        return NEG_INF
    return ln + lu + _log_phipow(par, k, r)


def x_prime(par: Params, k: int, r: int) -> LogNumber:
    return LogNumber(_lx(par, k, r))


def x_components(par: Params, k: int, r: int) -> dict[str, float]:
    return {
        "log_N": _log_n(par.n, k, r),
        "log_U": _log_u(par.n, par.m, k, r),
        "log_phi_power": _log_phipow(par, k, r),
    }


# ---------------------------------------------------------------- r1, r0, k0


def r1_cutoff(par: Params) -> int:
    """ceil(8 (ln np)^3 / (n p^2))."""
    np_ = par.n * par.p
    if np_ <= math.e:
        raise InputError(f"np = {np_:.4g} <= e; r1 undefined")
    return max(1, math.ceil(8 * math.log(np_) ** 3 / (par.n * par.p**2)))


def r_max(par: Params, k: int) -> int:
    """Largest admissible r: r <= r1, r <= k and k + r <= n."""
    return max(0, min(r1_cutoff(par), k, par.n - k))


PROFILE_MIN_T = 10**8


def _dlgamma(z, d):
    """ln Gamma(z + d) - ln Gamma(z) for large z and |d| << z (Stirling, float arrays)."""
    return (z - 0.5) * np.log1p(d / z) + d * np.log(z + d) - d + (1 / (z + d) - 1 / z) / 12


def x_profile(par: Params, k: int) -> np.ndarray:
    """ln X'(k, r) for r = 0..r_max.

    Small instances evaluate every term exactly.  Large ones anchor the exact
    value at r = 0 and accumulate the ratio over r: the N ratio is exact, the U
    ratio comes from Stirling differences (absolute error ~1e-10 per step), and
    the phi power is evaluated directly.
    """
    top = r_max(par, k)
    if par.T < PROFILE_MIN_T:
        return np.array([_lx(par, k, r) for r in range(top + 1)])
    n, m, T = par.n, par.m, par.T
    r = np.arange(top, dtype=np.float64)
    kf = float(k)
    lnN = np.log((n - kf - r) * (kf - r) / (2 * (r + 1)))
    M1 = ((kf + r) * (kf + r - 1) / 2 - r * (2 * r - 1) + r)
    A = T - M1
    d = kf - 3 * r
    with np.errstate(divide="ignore", invalid="ignore"):
        lnU = np.log(m - r) + _dlgamma(A + 1, -d) - _dlgamma(A - m + r + 1, 1 - d)
    steps = lnN + lnU
    prof = np.empty(top + 1)
    prof[0] = _log_n(n, k, 0) + _log_u(n, m, k, 0)
    prof[1:] = prof[0] + np.cumsum(steps)
    rr = np.arange(top + 1, dtype=np.float64)
    e = n - kf - rr
    prof += np.where(e == 0, 0.0, e * -(par.p * (kf - rr) + 1) * np.exp(-par.p * (kf - rr)))
    return prof


def _argmax_profile(par: Params, k: int, prof: np.ndarray, tol: float = 1e-6) -> tuple[int, float]:
    """Exact argmax (smallest r on ties) among profile entries within tol of the top."""
    top = float(prof.max())
    cands = np.flatnonzero(prof >= top - tol)
    if par.T < PROFILE_MIN_T:
        return int(cands[0]), top
    vals = [(_lx(par, k, int(r)), -int(r)) for r in cands]
    best, neg = max(vals)
    return -neg, best


def r0_argmax(par: Params, k: int, exact: bool = False) -> int:
    """argmax over 0 <= r <= r_max of X'(k, r), smallest r on ties.

    The whole range is scanned; the profile need not be unimodal (for r near
    1/p the U factor grows like e^{3rp} and a second mode can appear).
    ``exact=True`` evaluates every term at full precision.
    """
    if exact:
        top = r_max(par, k)
        vals = [_lx(par, k, r) for r in range(top + 1)]
        return max(range(top + 1), key=lambda r: (vals[r], -r))
    return _argmax_profile(par, k, x_profile(par, k))[0]


def local_r0(par: Params, k: int) -> int:
    """First r where X'(k, r) stops increasing (the mode nearest r = 0)."""
    prof = x_profile(par, k)
    down = np.flatnonzero(np.diff(prof) <= 0)
    return int(down[0]) if len(down) else len(prof) - 1


def r0_formulas(par: Params, k: int) -> dict[str, float]:
    """The two closed forms for r0: with the factor p (proof) and without (statement)."""
    base = k**3 / (2 * math.e**2 * par.n)
    return {"with_p": base * par.p, "without_p": base}


def _max_lx(par: Params, k: int) -> tuple[float, int]:
    r0, v = _argmax_profile(par, k, x_profile(par, k))
    return v, r0


def k_zero(par: Params) -> int:
    """Smallest k with max_{r <= r1} X'(k, r) < n^eps, searched from k_V.

    max_r X' decreases in k on the relevant range, so the search gallops away
    from k_V (down if the condition holds there, up otherwise) and bisects.
    """
    thr = par.threshold
    ok = lambda k: _max_lx(par, k)[0] < thr
    kv = k_vanilla(par)
    if ok(kv):
        hi, step = kv, 1
        lo = kv - 1
        while lo > 0 and ok(lo):
            hi = lo
            lo = max(0, kv - 2 * step)
            step *= 2
        if lo == 0 and ok(0):
            return 0
        return _first_true(lo + 1, hi, ok)
    lo, step = kv, 1
    hi = kv + 1
    while hi < par.n and not ok(hi):
        lo = hi
        hi = min(par.n, kv + 2 * step)
        step *= 2
    return _first_true(lo + 1, hi, ok)


# ---------------------------------------------------------------- sums and ratios

GAUSSIAN_REF = math.sqrt(2 * math.pi)


@dataclass
class FirstMomentSum:
    log_sum: float
    r0: int
    log_x_r0: float
    ratio: float | None
    terms: int
    gaussian_ref: float = GAUSSIAN_REF


def first_moment_sum(par: Params, k: int, exact: bool = False) -> FirstMomentSum:
    """Sum of X'(k, r) over r <= r1 and its ratio to sqrt(r0) X'(k, r0).

    The sum is taken relative to the exact X'(k, r0), so the profile's
    accumulated float error only enters the ratio, at ~1e-7 relative.
    ``exact=True`` sums full-precision terms instead.
    """
    if exact:
        top = r_max(par, k)
        lx = [_lx(par, k, r) for r in range(top + 1)]
        r0 = max(range(top + 1), key=lambda r: (lx[r], -r))
        total = log_sum(LogNumber(v) for v in lx).log_value
        lx0 = lx[r0]
    else:
        prof = x_profile(par, k)
        r0, lx0 = _argmax_profile(par, k, prof)
        rel = prof - prof[r0]
        total = lx0 + math.log(math.fsum(np.exp(rel[np.isfinite(rel)])))
    ratio = None if r0 == 0 else math.exp(total - lx0 - 0.5 * math.log(r0))
    top = r_max(par, k)
    return FirstMomentSum(total, r0, lx0, ratio, top + 1)


@dataclass
class RatioRow:
    computed: float
    predicted: float

    @property
    def rel_err(self) -> float:
        return abs(self.computed / self.predicted - 1)


def ratio_suite(par: Params, k: int, r: int) -> dict[str, RatioRow]:
    """Computed consecutive ratios next to their leading-order predictions."""
    n, p = par.n, par.p
    e2 = math.e**2
    ex = math.exp
    rows = {}
    rows["N_k"] = RatioRow(ex(_log_n(n, k + 1, r) - _log_n(n, k, r)), n / k)
    rows["N_r"] = RatioRow(ex(_log_n(n, k, r + 1) - _log_n(n, k, r)), (n - k - r) * (k - r) / (2 * (r + 1)))
    lu = lambda kk, rr: _log_u(n, par.m, kk, rr)
    rows["U_k"] = RatioRow(ex(lu(k + 1, r) - lu(k, r)), k**2 / (e2 * n**2))
    rows["U_r"] = RatioRow(ex(lu(k, r + 1) - lu(k, r)), ex((3 * r - k) * p) * p)
    lp = lambda kk, rr: _log_phipow(par, kk, rr)
    rows["phi_k"] = RatioRow(ex(lp(k + 1, r) - lp(k, r)), 1.0)
    rows["phi_r"] = RatioRow(ex(lp(k, r + 1) - lp(k, r)), 1.0)
    rows["X_k"] = RatioRow(ex(_lx(par, k + 1, r) - _lx(par, k, r)), k / (e2 * n))
    rows["X_r"] = RatioRow(ex(_lx(par, k, r + 1) - _lx(par, k, r)), k**3 * p / (2 * e2 * n * (r + 1)))
    # one more edge: m -> m+1 moves p as well
    nxt = Params(n, par.m + 1, par.eps)
    rows["X_m"] = RatioRow(ex(_lx(nxt, k, r) - _lx(par, k, r)), 1 - k**2 / n**2)
    d1 = _lx(par, k, r + 1) - _lx(par, k, r)
    d2 = _lx(par, k, r + 2) - _lx(par, k, r + 1)
    rows["X_rr"] = RatioRow(ex(d2 - d1), 1 - 1 / (r + 2))
    return rows


# ---------------------------------------------------------------- bounds


def _hyper_check(a: int, b: int, c: int) -> None:
    if not (0 <= c <= a and 0 <= b <= a):
        raise InputError(f"hypergeometric needs 0 <= b, c <= a (a={a}, b={b}, c={c})")


def hyper_pmf(a: int, b: int, c: int, i: int) -> float:
    """P(H = i): b draws without replacement from a items, c of them marked."""
    _hyper_check(a, b, c)
    return float(hyper_pmf_exact(a, b, c, i))


def hyper_pmf_exact(a: int, b: int, c: int, i: int) -> Fraction:
    if i < 0 or i > b or i > c or b - i > a - c:
        return Fraction(0)
    return Fraction(math.comb(c, i) * math.comb(a - c, b - i), math.comb(a, b))


def hyper_tail_exact(a: int, b: int, c: int, t: float, tail: str) -> Fraction:
    """Exact P(H > mu + t) ("upper") or P(H < mu - t) ("lower")."""
    _hyper_check(a, b, c)
    mu = Fraction(b * c, a)
    t = Fraction(t)
    if tail == "upper":
        return sum((hyper_pmf_exact(a, b, c, i) for i in range(b + 1) if i > mu + t), Fraction(0))
    if tail == "lower":
        return sum((hyper_pmf_exact(a, b, c, i) for i in range(b + 1) if i < mu - t), Fraction(0))
    raise InputError(f"tail must be 'upper' or 'lower', got {tail!r}")


def chernoff_hyper(a: int, b: int, c: int, t: float, tail: str) -> float:
    """exp(-t^2 / (2(mu + t/3))) for the upper tail, exp(-t^2 / (2(mu - t/3))) for the lower."""
    _hyper_check(a, b, c)
    if t < 0:
        raise InputError("t must be non-negative")
    mu = b * c / a
    if t == 0:
        return 1.0
    if tail == "upper":
        return math.exp(-t * t / (2 * (mu + t / 3)))
    if tail == "lower":
        if t > mu:
            raise InputError("lower tail needs t <= mu")
        return math.exp(-t * t / (2 * (mu - t / 3)))
    raise InputError(f"tail must be 'upper' or 'lower', got {tail!r}")


def janson_variant_bound(N: int, t: int, p: float) -> tuple[float, float, float]:
    """(mu, sigma, bound) for P(no vertex outside T has degree <= 1) in G(N, N, p)."""
    if not 0 <= t <= 2 * N:
        raise InputError("need 0 <= t <= 2N")
    if not 0 <= p <= 1:
        raise InputError("p outside [0, 1]")
    q = 1 - p
    mu = (2 * N - t) * (q**N + N * p * q ** (N - 1))
    sigma = p * N * (q ** (N - 1) + (N - 1) * p * q ** (N - 2)) if N >= 2 else p * N * q ** (N - 1)
    if mu == 0:
        return mu, sigma, 1.0
    if sigma == 0:
        return mu, sigma, math.exp(-mu)
    return mu, sigma, math.exp(-mu + mu * sigma * math.log1p(1 / sigma))


def janson_exact_p0(N: int, tA: int, tB: int, p: float) -> float:
    """Exact P(every vertex outside T has degree >= 2) in G(N, N, p), by 2^(N^2) enumeration.

    T holds the first tA vertices of one side and the first tB of the other.
    """
    total = 0.0
    cells = N * N
    for mask in range(1 << cells):
        rows = [(mask >> (i * N)) & ((1 << N) - 1) for i in range(N)]
        ok = all(rows[i].bit_count() >= 2 for i in range(tA, N))
        if ok:
            ok = all(sum(rows[i] >> j & 1 for i in range(N)) >= 2 for j in range(tB, N))
        if ok:
            e = mask.bit_count()
            total += p**e * (1 - p) ** (cells - e)
    return total


# ---------------------------------------------------------------- G(n,p) corollary


def gnp_corollary(n: int, p: float, ell: float = 1.0) -> float:
    """Length of the concentration window in G(n,p): ell (ln n) p^{-3/2} / n."""
    return ell * math.log(n) * p**-1.5 / n


def m0_spacing(n: int, k: float) -> float:
    """Predicted gap m0(k) - m0(k+1) ~ n^2 ln(n/k) / k^2."""
    return n * n * math.log(n / k) / (k * k)


def m0_threshold(n: int, k: int, m_lo: int, m_hi: int, eps: float = 0.1) -> int:
    """Smallest m in [m_lo, m_hi] with k_zero(n, m) <= k (k_zero falls as m grows)."""
    return _first_true(m_lo, m_hi, lambda m: k_zero(Params(n, m, eps)) <= k)


def observed_m0_spacing(n: int, m: int, count: int = 4, eps: float = 0.1) -> tuple[float, int]:
    """Mean gap between consecutive m-thresholds of k_zero near m, and the k used."""
    k0 = k_zero(Params(n, m, eps))
    width = int(4 * m0_spacing(n, k0)) + 10
    marks = []
    for j in range(count + 1):
        kk = k0 - j
        lo = marks[-1] if marks else max(1, m - width)
        hi = lo + width * 2
        while k_zero(Params(n, hi, eps)) > kk:
            hi += width
        marks.append(m0_threshold(n, kk, lo, hi, eps))
    gaps = [b - a for a, b in zip(marks, marks[1:])]
    return sum(gaps) / len(gaps), k0


# ---------------------------------------------------------------- report


@dataclass
class PredictionReport:
    n: int
    m: int
    p: float
    eps: float
    k_V: int
    k_0: int
    r_0: int
    r_1: int
    interval: list[int]
    regime: dict[str, bool]
    k_V_window: dict[str, float]
    r_0_formulas: dict[str, float]
    components: dict[str, float]
    table: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, allow_nan=True) + "\n"


def predict(par: Params, table_radius: int = 3) -> PredictionReport:
    kv = k_vanilla(par)
    warnings = []
    reg = par.regime()
    if not reg["main"]:
        warnings.append("m outside (n^(5/4+eps), n^(4/3+eps)); asymptotic regime not met")
    try:
        r1 = r1_cutoff(par)
    except InputError as err:
        # without r1 no X' threshold exists; report the vanilla side only
        warnings.append(str(err))
        return PredictionReport(par.n, par.m, par.p, par.eps, kv, kv, 0, 0, [kv - 1, kv], reg,
                                {}, {}, {}, [], warnings)
    k0 = k_zero(par)
    r0 = r0_argmax(par, k0)
    if k0 > kv:
        warnings.append("k_0 > k_V: X' surrogate exceeds n^eps at large r (r1 >= k regime)")
    table = []
    for k in sorted(set(range(max(1, k0 - table_radius), min(par.n, k0 + table_radius) + 1)) | {kv}):
        lx, rr = _max_lx(par, k)
        table.append({"k": k, "r_0": rr, "log_max_x_prime": lx, "log_expected_ind_sets": _log_ind(par, k)})
    centre = k_vanilla_formula(par) if par.n * par.p > 1 else float("nan")
    return PredictionReport(
        n=par.n, m=par.m, p=par.p, eps=par.eps, k_V=kv, k_0=k0, r_0=r0, r_1=r1,
        interval=[k0 - 1, k0], regime=reg,
        k_V_window={"centre": centre, "half_width": 0.05 * 2 / par.p if par.p else float("nan"),
                    "offset": kv - centre},
        r_0_formulas=r0_formulas(par, k0), components=x_components(par, k0, r0),
        table=table, warnings=warnings,
    )
