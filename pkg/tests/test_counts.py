import math
from fractions import Fraction

import numpy as np
import pytest

from sievelab.counts import (
    interval_count,
    log_weight_sum,
    mean_identity_residual,
    psi_dfs,
    psi_k,
    psi_sieve,
    survivors,
)
from sievelab.errors import BudgetExceeded, ExplosionGuard
from sievelab.primes import from_explicit, primes_up_to

from conftest import brute_psi, random_prime_set


def test_psi_examples():
    P = from_explicit([2, 3, 5], bound_x=30)
    assert psi_sieve(30, P).value == 18
    assert psi_dfs(30, P).value == 18
    assert psi_sieve(100, primes_up_to(100)).value == 100
    assert psi_sieve(100, from_explicit([], bound_x=100)).value == 1
    assert psi_dfs(1, from_explicit([2], bound_x=2)).value == 1


def test_psi_dfs_powers_of_two():
    assert psi_dfs(10**6, from_explicit([2], bound_x=10**6)).value == 20


def test_engines_agree_random(factor_matrix):
    rng = np.random.default_rng(11)
    for _ in range(25):
        x = int(rng.integers(10, 3000))
        P = random_prime_set(rng, x)
        a = psi_sieve(x, P).value
        b = psi_dfs(x, P).value
        c = brute_psi(x, P, factor_matrix)
        assert a == b == c


def test_psi_monotonicity():
    rng = np.random.default_rng(5)
    x = 2000
    P = random_prime_set(rng, x)
    vals = [psi_sieve(t, P).value for t in range(1, 200)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    # adding a prime never decreases the count
    missing = [p for p in primes_up_to(x).members if p not in P]
    if missing:
        bigger = from_explicit(list(P.members) + [missing[0]], bound_x=x)
        assert psi_sieve(x, bigger).value >= psi_sieve(x, P).value


def test_survivors_list():
    P = from_explicit([2, 3, 5], bound_x=30)
    got = list(survivors(30, P))
    assert got[:6] == [1, 2, 3, 4, 5, 6] and 7 not in got and 25 in got
    assert len(got) == 18


def test_budget_and_guard_errors():
    with pytest.raises(BudgetExceeded):
        psi_sieve(100, from_explicit([2], bound_x=100), budget=10)
    with pytest.raises(ExplosionGuard):
        psi_dfs(10**6, primes_up_to(10**6), node_budget=100)


def test_interval_count_examples():
    E = from_explicit([2, 3, 5, 7])
    assert interval_count(10, 10, E).value == 4  # {11,13,17,19}
    assert interval_count(0, 0, E).value == 0
    # T0=0 matches psi of the complementary set
    x = 500
    Eb = from_explicit([2, 3], bound_x=x)
    from sievelab.primes import complement_within

    P = complement_within(Eb, x)
    assert interval_count(0, x, Eb).value == psi_sieve(x, P).value


def test_psi_k_examples():
    P = from_explicit([2, 3, 5], bound_x=30)
    assert psi_k(30, P, 2).value == 3  # {6,10,15}
    assert psi_k(30, P, 3).value == 1  # {30}
    assert psi_k(30, P, 1).value == 3
    with pytest.raises(ValueError):
        psi_k(30, P, 0)


def test_psi_k_upper_bound():
    # sqrt(x) + 1.2*(2k/(k-1)!)*(sum 1/p)^(k-1)*x/log(x) envelope
    x = 10**5
    P = primes_up_to(1000)
    P = from_explicit(P.members, bound_x=x)
    s = float(P.reciprocal_sum(0, x))
    for k in (2, 3, 4):
        lhs = psi_k(x, P, k).value
        rhs = math.sqrt(x) + 1.2 * (2 * k / math.factorial(k - 1)) * s ** (k - 1) * x / math.log(x)
        assert lhs <= rhs


def test_log_weight_examples():
    res = log_weight_sum(10, from_explicit([2, 3], bound_x=10))
    assert res.exact == Fraction(179, 72)
    assert log_weight_sum(5, from_explicit([], bound_x=5)).approx == 1.0
    assert log_weight_sum(1, from_explicit([2], bound_x=2)).approx == 1.0


def test_log_weight_bounds_harmonic():
    x = 10**4
    P = primes_up_to(100)
    P = from_explicit(P.members, bound_x=x)
    res = log_weight_sum(x, P)
    H = float(np.sum(1.0 / np.arange(1, x + 1)))
    assert 1.0 <= res.approx <= H


def test_mean_identity_residual():
    P = from_explicit([2, 3, 5], bound_x=30)
    assert mean_identity_residual(30, P) <= 1e-12
    assert mean_identity_residual(1, P) == 0.0
    rng = np.random.default_rng(19)
    for _ in range(5):
        Q = random_prime_set(rng, 10**4)
        assert mean_identity_residual(10**4, Q) <= 1e-9
    with pytest.raises(ValueError):
        mean_identity_residual(30, P, grid=5)


def test_json_rows():
    res = psi_sieve(30, from_explicit([2, 3, 5], bound_x=30))
    js = res.to_json()
    assert '"value": 18' in js and '"method": "IntervalSieve"' in js
