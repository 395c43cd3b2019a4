"""Exact survivor counts: Psi(x;P), shifted-interval counts, Psi_k, and
logarithmic-weight sums.

Two independent engines compute Psi: an array sieve crossing out multiples of
the complementary primes, and a depth-first enumeration of products over P.
They must always agree exactly; the test suite leans on that hard.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from math import fsum, isqrt

import numpy as np

from .errors import BudgetExceeded, ExplosionGuard
from .primes import PrimeSet, complement_within, fnv1a64

PSI_BUDGET = 10**9
DFS_NODE_BUDGET = 10**8
EXACT_TERM_LIMIT = 10**5


@dataclass(frozen=True)
class CountResult:
    value: int
    method: str  # "IntervalSieve" | "SmoothDFS"
    x: int
    elapsed: float
    set_checksum: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {"x": self.x, "set_checksum": self.set_checksum, "method": self.method,
             "value": self.value},
            sort_keys=True,
        )


@dataclass(frozen=True)
class LogWeightResult:
    approx: float
    term_count: int
    exact: Fraction | None = None
    error_bound: float = 0.0

    def to_json(self) -> str:
        row = {"value": self.approx, "term_count": self.term_count}
        if self.exact is not None:
            row["exact_num"] = self.exact.numerator
            row["exact_den"] = self.exact.denominator
        return json.dumps(row, sort_keys=True)


def _survivor_mask(x: int, E_members: np.ndarray) -> np.ndarray:
    """alive[n-1] for n in 1..x after crossing out all multiples of E."""
    alive = np.ones(x, dtype=bool)  # index i <-> integer i+1
    E = np.asarray(E_members, dtype=np.int64)
    E = E[E <= x]
    if len(E) == 0:
        return alive
    # small primes: one strided slice each
    cut = x // 64
    small = E[E <= cut]
    for p in small:
        p = int(p)
        alive[p - 1 :: p] = False
    # large primes: few multiples each; batch all k-th multiples at once.
    large = E[E > cut]
    if len(large):
        kmax = x // int(large[0])
        for k in range(1, kmax + 1):
            # primes p with k*p <= x form a prefix of `large`
            top = np.searchsorted(large, x // k, side="right")
            if top == 0:
                break
            alive[k * large[:top] - 1] = False
    return alive


def survivors(x: int, P: PrimeSet, budget: int = PSI_BUDGET) -> np.ndarray:
    """Sorted integers n <= x with every prime factor in P (includes n=1)."""
    if x > budget:
        raise BudgetExceeded(f"x={x} above psi budget {budget}")
    if x < 1:
        return np.empty(0, dtype=np.int64)
    if P.bound_x < x:
        raise ValueError("P.bound_x must be >= x")
    E = complement_within(P, P.bound_x).members
    alive = _survivor_mask(x, E)
    return np.nonzero(alive)[0].astype(np.int64) + 1


def psi_sieve(x: int, P: PrimeSet, budget: int = PSI_BUDGET) -> CountResult:
    t0 = time.perf_counter()
    if x > budget:
        raise BudgetExceeded(f"x={x} above psi budget {budget}")
    if x < 1:
        value = 0
    else:
        if P.bound_x < x:
            raise ValueError("P.bound_x must be >= x")
        E = complement_within(P, P.bound_x).members
        value = int(np.count_nonzero(_survivor_mask(x, E)))
    return CountResult(value, "IntervalSieve", x, time.perf_counter() - t0, fnv1a64(P.members))


def psi_dfs(x: int, P: PrimeSet, node_budget: int = DFS_NODE_BUDGET) -> CountResult:
    """Count products p1^e1*...*pm^em <= x over primes of P by DFS."""
    t0 = time.perf_counter()
    primes = [int(p) for p in P.members if p <= x]
    m = len(primes)
    nodes = 0

    def walk(limit: int, i: int) -> int:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ExplosionGuard(f"DFS exceeded {node_budget} nodes")
        total = 1  # the product assembled so far
        for j in range(i, m):
            p = primes[j]
            if p > limit:
                break
            q = limit // p
            while True:
                total += walk(q, j + 1)
                if q < p:
                    break
                q //= p
        return total

    value = walk(x, 0) if x >= 1 else 0
    return CountResult(value, "SmoothDFS", x, time.perf_counter() - t0, fnv1a64(P.members))


def interval_count(T0: int, x: int, E: PrimeSet, budget: int = PSI_BUDGET) -> CountResult:
    """Number of n in (T0, T0+x] divisible by no prime of E."""
    t0 = time.perf_counter()
    if x > budget:
        raise BudgetExceeded(f"x={x} above psi budget {budget}")
    if x <= 0:
        return CountResult(0, "IntervalSieve", x, time.perf_counter() - t0, fnv1a64(E.members))
    alive = np.ones(x, dtype=bool)  # index i <-> integer T0+1+i
    hi = T0 + x
    for p in E.members:
        p = int(p)
        if p > hi:
            break
        first = ((T0 // p) + 1) * p
        if first <= hi:
            alive[first - T0 - 1 :: p] = False
    return CountResult(
        int(np.count_nonzero(alive)), "IntervalSieve", x, time.perf_counter() - t0,
        fnv1a64(E.members),
    )


def psi_k(x: int, P: PrimeSet, k: int, node_budget: int = DFS_NODE_BUDGET) -> CountResult:
    """Squarefree n <= x with exactly k prime factors, all in P."""
    if k < 1:
        raise ValueError("k >= 1 required")
    t0 = time.perf_counter()
    primes = [int(p) for p in P.members if p <= x]
    m = len(primes)
    nodes = 0

    def walk(limit: int, i: int, left: int) -> int:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ExplosionGuard(f"DFS exceeded {node_budget} nodes")
        if left == 0:
            return 1
        total = 0
        for j in range(i, m):
            p = primes[j]
            # the remaining left-1 primes all exceed p, so p^left must fit
            if p**left > limit:
                break
            total += walk(limit // p, j + 1, left - 1)
        return total

    value = walk(x, 0, k) if x >= 1 else 0
    return CountResult(value, "SmoothDFS", x, time.perf_counter() - t0, fnv1a64(P.members))


def _exact_reciprocal_sum(values: np.ndarray) -> Fraction:
    """Divide-and-conquer exact sum of 1/n; gmpy2 keeps the big rationals fast."""
    try:
        from gmpy2 import mpq

        def rec(lo, hi):
            if hi - lo <= 32:
                s = mpq(0)
                for v in values[lo:hi]:
                    s += mpq(1, int(v))
                return s
            mid = (lo + hi) // 2
            return rec(lo, mid) + rec(mid, hi)

        q = rec(0, len(values))
        return Fraction(int(q.numerator), int(q.denominator))
    except ImportError:  # pragma: no cover
        def rec2(lo, hi):
            if hi - lo <= 32:
                return sum(Fraction(1, int(v)) for v in values[lo:hi])
            mid = (lo + hi) // 2
            return rec2(lo, mid) + rec2(mid, hi)

        return rec2(0, len(values))


def log_weight_sum(x: int, P: PrimeSet, budget: int = PSI_BUDGET,
                   exact_limit: int = EXACT_TERM_LIMIT) -> LogWeightResult:
    """Sum of 1/n over n <= x with all prime factors in P."""
    if x < 1:
        return LogWeightResult(0.0, 0, Fraction(0))
    surv = survivors(x, P, budget=budget)
    approx = fsum(1.0 / surv)
    err = len(surv) * 2.3e-16 * approx
    exact = _exact_reciprocal_sum(surv) if len(surv) <= exact_limit else None
    if exact is not None:
        approx = float(exact)
        err = 0.0
    return LogWeightResult(approx, len(surv), exact, err)


def mean_identity_residual(x: int, P: PrimeSet, grid: int = 10,
                           budget: int = PSI_BUDGET) -> float:
    """|LHS - RHS| of the partial-summation identity

        sum_{n<=x smooth} 1/n  =  Psi(x;P)/x + int_1^x Psi(t;P)/t^2 dt,

    with the integral evaluated exactly from the survivor step function.
    """
    if grid < 10:
        raise ValueError("grid >= 10 required")
    if x < 1:
        return 0.0
    surv = survivors(x, P, budget=budget)
    lhs = fsum(1.0 / surv)
    m = len(surv)
    # Psi(t) = j on [s_j, s_{j+1}); integral = sum_j j*(1/s_j - 1/s_{j+1})
    bounds = np.append(surv.astype(np.float64), float(x))
    terms = np.arange(1, m + 1, dtype=np.float64) * (1.0 / bounds[:-1] - 1.0 / bounds[1:])
    rhs = m / float(x) + fsum(terms)
    return abs(lhs - rhs)
