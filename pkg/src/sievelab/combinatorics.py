"""Exact additive combinatorics: representation counts, weighted window
masses, the window pigeonhole, GAP representation bounds, and the discrete
hypothesis checkers.

Tuple counts are always over ordered tuples.  Weighted sums are exact
rationals whenever the convolution fits the exactness budget; above it we
fall back to float convolution of positive terms, whose relative error is
bounded and reported (see HypAReport.mode).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import fsum, isqrt

import numpy as np

from .constants import E_HI, E_LO, exp_enclosure
from .errors import AmbiguousBoundary, BudgetExceeded, DiscretizationInconclusive, ExplosionGuard
from .primes import PrimeSet, from_explicit, sieve_range

EXACT_CONV_BUDGET = 4 * 10**6  # elements*cap*k ops allowed in exact rational mode
DFS_TUPLE_BUDGET = 10**6


# ---------------------------------------------------------------------------
# domain types


def _e_window_check(a: int, N: int, u, v) -> bool:
    """N/(e*v) < a <= N/u with the e-comparison done against the certified
    enclosure; a tie inside the bar raises AmbiguousBoundary."""
    u = Fraction(u)
    v = Fraction(v)
    if not Fraction(a) * u <= N:
        return False
    lo, hi = Fraction(N) / (E_HI * v), Fraction(N) / (E_LO * v)
    if a > hi:
        return True
    if a <= lo:
        return False
    raise AmbiguousBoundary(f"a={a} vs N/(ev) enclosure ({lo}, {hi})")


@dataclass(frozen=True)
class WeightedIntegerSet:
    """The set A of integers in (N/(e*v), N/u], with its parameters."""

    N: int
    u: Fraction
    v: Fraction
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements))))
        if not 1 <= self.u <= self.v:
            raise ValueError("need 1 <= u <= v")
        for a in self.elements:
            if not _e_window_check(a, self.N, self.u, self.v):
                raise ValueError(f"element {a} outside (N/(ev), N/u] for N={self.N}")

    @classmethod
    def full_interval(cls, N: int, u, v) -> "WeightedIntegerSet":
        u, v = Fraction(u), Fraction(v)
        hi = int(Fraction(N) / u)
        lo_bar = Fraction(N) / (E_LO * v)
        lo = int(lo_bar)  # candidates start just above N/(ev)
        elems = [a for a in range(max(1, lo - 2), hi + 1) if _e_window_check(a, N, u, v)]
        return cls(N, u, v, tuple(elems))

    def reciprocal_sum(self) -> Fraction:
        return sum((Fraction(1, a) for a in self.elements), Fraction(0))

    def k_range(self) -> range:
        """Integer k in [u, ev]; endpoints included when integral."""
        k_lo = math.ceil(self.u)
        hi_bar = self.v * E_LO
        k_hi = int(hi_bar)
        if Fraction(k_hi + 1) <= self.v * E_HI and Fraction(k_hi + 1) >= self.v * E_LO:
            raise AmbiguousBoundary("k upper endpoint inside e*v enclosure")
        return range(k_lo, k_hi + 1)


# ---------------------------------------------------------------------------
# representation tables


@dataclass
class RepTable:
    k: int
    cap: int
    counts: dict[int, int]
    weighted: dict[int, Fraction]

    def count(self, n: int) -> int:
        return self.counts.get(n, 0)

    def weight(self, n: int) -> Fraction:
        return self.weighted.get(n, Fraction(0))


def _count_convolution(A: list[int], k: int, cap: int) -> np.ndarray:
    """counts[n] = #ordered k-tuples from A with sum n, for n <= cap.
    int64 with overflow escalation to Python ints."""
    if len(A) ** k >= 2**62:
        raise OverflowError("use _count_convolution_big")
    base = np.zeros(cap + 1, dtype=np.int64)
    for a in A:
        if a <= cap:
            base[a] += 1
    out = base.copy()
    for _ in range(k - 1):
        out = np.convolve(out, base)[: cap + 1]
    return out


def _count_convolution_big(A: list[int], k: int, cap: int) -> list[int]:
    base = [0] * (cap + 1)
    for a in A:
        if a <= cap:
            base[a] += 1
    out = base[:]
    for _ in range(k - 1):
        nxt = [0] * (cap + 1)
        for s, c in enumerate(out):
            if c:
                for a in A:
                    if s + a <= cap:
                        nxt[s + a] += c
        out = nxt
    return out


def _weighted_convolution_exact(A: list[int], k: int, cap: int) -> dict[int, Fraction]:
    try:
        from gmpy2 import mpq
    except ImportError:  # pragma: no cover
        mpq = Fraction
    base = {a: mpq(1, a) for a in A if a <= cap}
    out = dict(base)
    for _ in range(k - 1):
        nxt: dict = {}
        for s, w in out.items():
            for a, wa in base.items():
                t = s + a
                if t <= cap:
                    if t in nxt:
                        nxt[t] += w * wa
                    else:
                        nxt[t] = w * wa
        out = nxt
    return {n: Fraction(int(q.numerator), int(q.denominator)) for n, q in out.items()}


def _weighted_convolution_float(A: list[int], k: int, cap: int) -> np.ndarray:
    base = np.zeros(cap + 1)
    for a in A:
        if a <= cap:
            base[a] += 1.0 / a
    out = base.copy()
    for _ in range(k - 1):
        out = np.convolve(out, base)[: cap + 1]
    return out


def rep_table(A, k: int, cap: int, budget: int = EXACT_CONV_BUDGET) -> RepTable:
    """Exact ordered-tuple representation counts and exact rational weighted
    sums for all n <= cap, via k-1 truncated self-convolutions."""
    A = sorted(set(int(a) for a in A))
    if k < 1:
        raise ValueError("k >= 1 required")
    if not A:
        return RepTable(k, cap, {}, {})
    if len(A) * cap * k > 50 * budget:
        raise BudgetExceeded("rep_table exact convolution above memory/ops budget")
    if len(A) ** k < 2**62:
        carr = _count_convolution(A, k, cap)
        counts = {int(n): int(c) for n, c in enumerate(carr) if c}
    else:
        counts = {n: c for n, c in enumerate(_count_convolution_big(A, k, cap)) if c}
    if len(A) * cap * k > budget:
        raise BudgetExceeded("rep_table exact weighted sums above budget")
    weighted = _weighted_convolution_exact(A, k, cap)
    return RepTable(k, cap, counts, weighted)


def thm71_count(B: WeightedIntegerSet, k: int) -> int:
    """#{ordered k-tuples from B with sum in [N-k, N]}."""
    if k < 1:
        raise ValueError("k >= 1 required")
    N = B.N
    carr = _count_convolution(list(B.elements), k, N)
    return int(carr[max(0, N - k) : N + 1].sum())


# ---------------------------------------------------------------------------
# sumsets


def sumset(A, B) -> set[int]:
    return {a + b for a in A for b in B}


def restricted_sumset(E) -> set[int]:
    """Sums a+b over the prescribed pair set E."""
    return {a + b for (a, b) in E}


@dataclass
class PopularPairSet:
    base: tuple[int, ...]
    delta: float
    threshold: Fraction
    pairs: set[tuple[int, int]]
    restricted: set[int]

    @property
    def certified_lower(self) -> float:
        return (1 - self.delta**2) * len(self.base) ** 2


def popular_pairs(B, delta: float) -> PopularPairSet:
    """Pairs (b1,b2) whose sum has at least delta^2*|B|^2/|2B| ordered
    2-representations; always at least (1-delta^2)|B|^2 of them."""
    if not 0 < delta < 1:
        raise ValueError("0 < delta < 1 required")
    B = tuple(sorted(set(int(b) for b in B)))
    two_B = sumset(B, B)
    r2: dict[int, int] = {}
    for b1 in B:
        for b2 in B:
            r2[b1 + b2] = r2.get(b1 + b2, 0) + 1
    thr = Fraction(delta).limit_denominator(10**9) ** 2 * len(B) ** 2 / len(two_B)
    pairs = {(b1, b2) for b1 in B for b2 in B if r2[b1 + b2] >= thr}
    return PopularPairSet(B, delta, thr, pairs, restricted_sumset(pairs))


# ---------------------------------------------------------------------------
# weighted window pigeonhole


def _window_mass_enum(B, w, k: int, lo, hi) -> Fraction | float:
    """Exact ordered-tuple mass with sum in (lo, hi], by DFS over sorted B."""
    m = len(B)
    exact = all(isinstance(w[b] if isinstance(w, dict) else w(b), (int, Fraction)) for b in B)
    wts = {b: (w[b] if isinstance(w, dict) else w(b)) for b in B}
    Bs = sorted(B)
    bmax = Bs[-1]
    total = Fraction(0) if exact else 0.0
    # ordered tuples == sum over nondecreasing tuples of multinomial perms
    fact = math.factorial(k)

    def perms(tup):
        c = fact
        for _, g in itertools.groupby(tup):
            c //= math.factorial(len(list(g)))
        return c

    nodes = 0

    def rec(start_idx, left, part_sum, part_wt, tup):
        nonlocal total, nodes
        nodes += 1
        if nodes > DFS_TUPLE_BUDGET:
            raise ExplosionGuard("window mass DFS exceeded tuple budget")
        if left == 0:
            if lo < part_sum <= hi:
                total += part_wt * perms(tup)
            return
        for i in range(start_idx, m):
            b = Bs[i]
            if part_sum + b * left > hi:  # later picks are >= b, nondecreasing
                break
            if part_sum + b + bmax * (left - 1) <= lo:
                continue
            rec(i, left - 1, part_sum + b, part_wt * wts[b], tup + (b,))

    rec(0, k, 0, Fraction(1) if exact else 1.0, ())
    return total


def window_best_k(B, w, x, y=None, z=None):
    """Window pigeonhole searcher: over k <= x/y, maximize the ordered-tuple weight
    mass with sum in (x-z, x], normalized by (sum w)^k.

    Returns (k, mass, beta_k).  The pigeonhole guarantees beta_k >= y/x at
    the maximizing k.
    """
    B = sorted(set(B))
    if not B:
        raise ValueError("B nonempty required")
    wts = {b: (w[b] if isinstance(w, dict) else w(b)) for b in B}
    if any(wt <= 0 for wt in wts.values()):
        raise ValueError("weights must be positive")
    y = y if y is not None else min(B) * (1 - 1e-12)
    z = z if z is not None else max(B)
    if not 0 < y < min(B) or not max(B) <= z <= x:
        raise ValueError("need B subset of (y, z] and z <= x")
    K = int(x / y)
    total_w = sum(wts.values())
    best = None
    inconclusive = False
    for k in range(1, K + 1):
        if len(B) ** k <= DFS_TUPLE_BUDGET:
            mass = _window_mass_enum(B, wts, k, x - z, x)
            beta = mass / total_w**k
        else:
            mass, _ = _window_mass_dp(B, wts, k, float(x - z), float(x))
            beta = mass / float(total_w) ** k
            inconclusive = True  # certified only if the lower bound clears y/x
        if best is None or beta > best[2]:
            best = (k, mass, beta)
    if inconclusive and not best[2] >= float(y) / float(x):
        raise DiscretizationInconclusive(
            f"binned DP lower bound {float(best[2]):.3g} cannot certify >= 1/K"
        )
    return best


def _window_mass_dp(B, wts, k: int, lo: float, hi: float, nbins: int = 1 << 20):
    """Binned k-fold convolution with outward rounding: returns certified
    (lower, upper) bounds on the ordered-tuple mass with sum in (lo, hi]."""
    from scipy.signal import fftconvolve

    h = hi / nbins
    base = np.zeros(nbins + 1)
    for b in B:
        i = min(int(b / h), nbins)  # true value inside [i*h, (i+1)*h]
        base[i] += float(wts[b])
    conv = base.copy()
    for _ in range(k - 1):
        conv = fftconvolve(conv, base)[: nbins + k + 1]
        conv[conv < 0] = 0.0
    idx = np.arange(len(conv))
    # bin-sum s means true sum in [s*h, (s+k)*h]
    certain_in = (idx * h > lo) & ((idx + k) * h <= hi)
    maybe_in = ((idx + k) * h > lo) & (idx * h <= hi)
    slack = conv.sum() * len(conv) * 1e-14  # fft roundoff
    return max(float(conv[certain_in].sum()) - slack, 0.0), float(conv[maybe_in].sum()) + slack


# ---------------------------------------------------------------------------
# prime products in a multiplicative window


def prime_product_window(P: PrimeSet, x: int, u, v, X,
                         node_budget: int = DFS_TUPLE_BUDGET):
    """Best ell <= K = ev*log(X)/log(x) maximizing the exact mass
    sum 1/(q1...qell) over ordered tuples with product in (X*x^(-1/u), X].

    Returns (ell, mass, K).  Guaranteed mass >= (sum 1/q)^ell / K.
    """
    u, v = Fraction(u), Fraction(v)
    primes = [int(p) for p in P.members]
    if not primes:
        raise ValueError("P nonempty required")
    logx = math.log(x)
    K = int(float(E_LO) * float(v) * math.log(float(X)) / logx)
    if K < 1:
        raise ValueError("K < 1: X too small")
    # window (X*x^(-1/u), X]: decide product > X*x^(-1/u) via prod^u * x > X^u
    Xf = Fraction(X)
    from gmpy2 import mpq

    total_recip = sum(mpq(1, p) for p in primes)

    un, ud = u.numerator, u.denominator

    def above_lo(prod: int) -> bool:
        # prod > X * x^(-1/u)  <=>  prod^u * x > X^u  <=>  prod^un * x^ud > X^un
        return Fraction(prod) ** un * Fraction(x) ** ud > Xf**un

    def mass_for(ell: int):
        fact = math.factorial(ell)
        total = mpq(0)
        nodes = 0
        ps = sorted(primes)

        def perms(tup):
            c = fact
            for _, g in itertools.groupby(tup):
                c //= math.factorial(len(list(g)))
            return c

        def rec(start, left, prod, tup):
            nonlocal total, nodes
            nodes += 1
            if nodes > node_budget:
                raise ExplosionGuard("prime product window DFS budget")
            if left == 0:
                if prod <= X and above_lo(prod):
                    total += mpq(perms(tup), prod)
                return
            for i in range(start, len(ps)):
                p = ps[i]
                if prod * p**left > X:  # later primes only larger
                    break
                rec(i, left - 1, prod * p, tup + (p,))

        rec(0, ell, 1, ())
        return Fraction(int(total.numerator), int(total.denominator))

    best = None
    for ell in range(1, K + 1):
        m = mass_for(ell)
        norm = m / Fraction(int(total_recip.numerator), int(total_recip.denominator)) ** ell
        if best is None or norm > best[3]:
            best = (ell, m, K, norm)
    return best[0], best[1], best[2]


# ---------------------------------------------------------------------------
# Hypothesis A checker


@dataclass
class HypAReport:
    satisfied_precondition: bool
    recip_sum: Fraction
    k: int | None = None
    n: int | None = None
    lhs: Fraction | float | None = None
    implied_alpha: float | None = None
    mode: str = "exact"
    float_error_bound: float = 0.0

    def to_json(self) -> str:
        row = {
            "precondition": self.satisfied_precondition,
            "recip_sum": float(self.recip_sum),
            "k": self.k,
            "n": self.n,
            "mode": self.mode,
            "implied_alpha": self.implied_alpha,
        }
        if isinstance(self.lhs, Fraction):
            row["lhs_num"], row["lhs_den"] = self.lhs.numerator, self.lhs.denominator
        else:
            row["lhs"] = self.lhs
        return json.dumps(row, sort_keys=True)


def hypA_check(A: WeightedIntegerSet, lambda2: float,
               budget: int = EXACT_CONV_BUDGET) -> HypAReport:
    """Search k in [u, ev] and n in [N-k, N] for the largest weighted
    representation mass; report the implied alpha_v.

    Exact rationals when the convolution fits the budget; float convolution
    (positive terms, bounded relative error) above it.
    """
    recip = A.reciprocal_sum()
    precondition = recip >= (1 + Fraction(lambda2).limit_denominator(10**9)) / A.u
    N = A.N
    ks = A.k_range()
    elems = list(A.elements)
    best = (None, None, Fraction(-1))
    use_exact = all(len(elems) * N * k <= budget for k in ks)
    err_bound = 0.0
    for k in ks:
        if use_exact:
            wv = _weighted_convolution_exact(elems, k, N)
            for n in range(max(0, N - k), N + 1):
                val = wv.get(n, Fraction(0))
                if val > best[2]:
                    best = (k, n, val)
        else:
            arr = _weighted_convolution_float(elems, k, N)
            err_bound = max(err_bound, (k * len(elems) + 10) * 2.3e-16)
            for n in range(max(0, N - k), N + 1):
                val = float(arr[n])
                if val > float(best[2]):
                    best = (k, n, val)
    k, n, lhs = best
    alpha = float(lhs) * N / float(recip) ** k if lhs and float(lhs) > 0 else 0.0
    return HypAReport(precondition, recip, k, n, lhs if float(lhs) >= 0 else Fraction(0),
                      alpha, "exact" if use_exact else "float", err_bound)


# ---------------------------------------------------------------------------
# Hypothesis P checker


@dataclass
class HypPReport:
    satisfied_precondition: bool
    recip_sum: Fraction
    k: int | None = None
    lhs: Fraction | None = None
    implied_pi: float | None = None
    tuple_count: int = 0

    def to_json(self) -> str:
        row = {
            "precondition": self.satisfied_precondition,
            "recip_sum": float(self.recip_sum),
            "k": self.k,
            "implied_pi": self.implied_pi,
            "tuples": self.tuple_count,
        }
        if self.lhs is not None:
            row["lhs_num"], row["lhs_den"] = self.lhs.numerator, self.lhs.denominator
        return json.dumps(row, sort_keys=True)


def hypP_check(P: PrimeSet, x: int, u, v, delta: float, lambda1: float,
               node_budget: int = 10**7) -> HypPReport:
    """Search k in [u, ev] for ordered prime tuples with product in
    ((1-delta)x, x); exact rational mass via pruned DFS."""
    u, v = Fraction(u), Fraction(v)
    from gmpy2 import mpq

    primes = sorted(int(p) for p in P.members)
    if not primes:
        return HypPReport(False, Fraction(0))
    recip_q = sum(mpq(1, p) for p in primes)
    recip = Fraction(int(recip_q.numerator), int(recip_q.denominator))
    precondition = recip >= (1 + Fraction(lambda1).limit_denominator(10**9)) / u
    d = Fraction(delta).limit_denominator(10**9)
    lo = (1 - d) * x  # strict: (1-delta)x < prod < x
    k_lo = math.ceil(u)
    k_hi = int(v * E_LO)
    best = (None, Fraction(-1))
    total_tuples = 0
    for k in range(k_lo, k_hi + 1):
        fact = math.factorial(k)
        total = mpq(0)
        nodes = 0
        ntup = 0

        def perms(tup):
            c = fact
            for _, g in itertools.groupby(tup):
                c //= math.factorial(len(list(g)))
            return c

        def rec(start, left, prod, tup):
            nonlocal total, nodes, ntup
            nodes += 1
            if nodes > node_budget:
                raise ExplosionGuard("hypP DFS node budget")
            if left == 0:
                if lo < prod < x:
                    c = perms(tup)
                    ntup += c
                    total += mpq(c, prod)
                return
            for i in range(start, len(primes)):
                p = primes[i]
                if prod * p**left >= x:
                    break
                rec(i, left - 1, prod * p, tup + (p,))

        rec(0, k, 1, ())
        mass = Fraction(int(total.numerator), int(total.denominator))
        norm = mass / recip**k
        if best[0] is None or norm > best[1] / recip ** best[0]:
            best = (k, mass)
            total_tuples = ntup
    k, lhs = best
    pi_v = float(lhs) * math.log(x) / (float(d) * float(recip) ** k) if lhs > 0 else 0.0
    return HypPReport(precondition, recip, k, lhs, pi_v, total_tuples)


# ---------------------------------------------------------------------------
# generalized arithmetic progressions


@dataclass(frozen=True)
class GAParithmetic:
    """{x0 + sum l_j x_j : |l_j| <= L_j}, rank d = len(steps)."""

    x0: int
    steps: tuple[int, ...]
    bounds: tuple[int, ...]

    def __post_init__(self):
        if len(self.steps) != len(self.bounds):
            raise ValueError("steps and bounds must align")
        if any(L < 1 for L in self.bounds):
            raise ValueError("bounds must be positive")

    @property
    def rank(self) -> int:
        return len(self.steps)

    def formal_size(self) -> int:
        out = 1
        for L in self.bounds:
            out *= 2 * L + 1
        return out

    def elements(self, limit: int = 10**6) -> list[int]:
        if self.formal_size() > limit:
            raise BudgetExceeded("GAP enumeration above budget")
        vals = {self.x0}
        for xj, Lj in zip(self.steps, self.bounds):
            vals = {v + l * xj for v in vals for l in range(-Lj, Lj + 1)}
        return sorted(vals)

    def is_proper(self) -> bool:
        return len(self.elements()) == self.formal_size()


@dataclass
class GapRepReport:
    k: int
    delta: float
    rho: float
    set_size: int
    q_size: int
    min_count: int
    bound: float
    min_ratio: float
    precondition_ok: bool


def gap_rep_check(P: GAParithmetic, k: int, delta: float,
                  limit: int = 10**6) -> GapRepReport:
    """Verify r_kP(n) >= (delta*|P|)^(k-1) for every n in the shrunk
    progression Q_k = {k*x0 + sum l_j x_j : |l_j| <= rho*k*L_j}."""
    d = P.rank
    if d > 3:
        raise ValueError("rank <= 3 required")
    if not 0 < delta < 1 / 6**d:
        raise ValueError("delta in (0, 1/6^d) required")
    rho = 1 - 3 * delta ** (1 / d)
    if rho < 0.5:
        return GapRepReport(k, delta, rho, 0, 0, 0, 0.0, math.inf, False)
    elems = P.elements(limit)
    size = len(elems)
    # exact integer k-fold convolution of the element set's indicator
    offset = min(elems)
    span = max(elems) - offset
    base = np.zeros(span + 1, dtype=np.int64)
    for e in elems:
        base[e - offset] = 1
    conv = base.copy()
    for _ in range(k - 1):
        conv = np.convolve(conv, base)
    # conv index i <-> value k*offset + i
    q_vals = {k * P.x0}
    for xj, Lj in zip(P.steps, P.bounds):
        M = int(rho * k * Lj)
        q_vals = {v + l * xj for v in q_vals for l in range(-M, M + 1)}
    bound = (delta * size) ** (k - 1)
    min_count, min_ratio = None, math.inf
    for n in q_vals:
        idx = n - k * offset
        c = int(conv[idx]) if 0 <= idx < len(conv) else 0
        ratio = c / bound
        if ratio < min_ratio:
            min_ratio, min_count = ratio, c
    return GapRepReport(k, delta, rho, size, len(q_vals), min_count or 0, bound,
                        min_ratio, True)


# ---------------------------------------------------------------------------
# the A -> primes realization (Proposition 5.1, P <= A direction)


def a_to_primes(A: WeightedIntegerSet, budget_N: int = 21) -> tuple[PrimeSet, dict]:
    """Primes in the union of (e^a, e^(a+1)) over a in A, with x = e^(floor(N)+1).

    Returns the realized set together with a discrepancy report comparing
    sum 1/p with sum 1/a.
    """
    if A.N > budget_N:
        raise BudgetExceeded(f"N={A.N} above a_to_primes budget {budget_N}")
    members: list[np.ndarray] = []
    for a in A.elements:
        lo_lo, lo_hi = exp_enclosure(a)
        hi_lo, hi_hi = exp_enclosure(a + 1)
        cand = sieve_range(int(lo_lo) - 1, int(hi_hi) + 1)
        sel = [int(p) for p in cand if lo_hi < int(p) < hi_lo]
        # flag candidates inside the enclosure bars (practically impossible)
        for p in cand:
            p = int(p)
            if lo_lo < p <= lo_hi or hi_lo <= p < hi_hi:
                raise AmbiguousBoundary(f"prime {p} on an e^a boundary enclosure")
        members.append(np.array(sel, dtype=np.int64))
    x_lo, x_hi = exp_enclosure(int(A.N) + 1)
    bound_x = int(x_lo)
    all_members = np.unique(np.concatenate(members)) if members else np.empty(0, np.int64)
    P = PrimeSet(bound_x, all_members, {"kind": "a_to_primes", "N": A.N})
    sum_p = float(fsum(1.0 / all_members)) if len(all_members) else 0.0
    sum_a = float(A.reciprocal_sum())
    report = {
        "sum_recip_primes": sum_p,
        "sum_recip_a": sum_a,
        "rel_discrepancy": abs(sum_p - sum_a) / sum_a if sum_a else 0.0,
    }
    return P, report
