"""Acceptance gate: the twelve headline checks, one pass/fail line each.

Each check prints `criterion NN: PASS|FAIL (detail)` and then asserts, so a
plain pytest run shows the full scoreboard.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from sievelab.combinatorics import (
    GAParithmetic,
    WeightedIntegerSet,
    gap_rep_check,
    prime_product_window,
    rep_table,
    thm71_count,
    window_best_k,
)
from sievelab.continuous import (
    OpenIntervalSet,
    reachable_one,
    simplex_integral_conv,
    simplex_integral_mc,
    window_search,
)
from sievelab.counts import log_weight_sum, psi_dfs, psi_k, psi_sieve
from sievelab.dickman import DickmanTable, dickman_rho
from sievelab.experiments import (
    replay,
    run_congruence_example,
    run_counterexample_scan,
    run_friedlander_example,
    run_hypothesis_pipeline,
)
from sievelab.primes import complement_within, from_explicit, primes_up_to

from conftest import brute_psi, random_prime_set

E_GAMMA = 1.7810724179901979


def verdict(n, ok, detail):
    print(f"criterion {n:02d}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {n} failed: {detail}"


def test_criterion_01_exact_count_oracles(factor_matrix):
    t0 = time.time()
    rng = np.random.default_rng(2024)
    mismatches = 0
    for _ in range(200):
        x = int(rng.integers(10, 10**5))
        P = random_prime_set(rng, x)
        a = psi_sieve(x, P).value
        b = psi_dfs(x, P).value
        c = brute_psi(x, P, factor_matrix)
        if not a == b == c:
            mismatches += 1
    elapsed = time.time() - t0
    verdict(1, mismatches == 0 and elapsed < 120,
            f"200 seeded sets, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_02_exact_values():
    P = from_explicit([2, 3, 5], bound_x=30)
    ok = (
        psi_sieve(30, P).value == 18
        and psi_k(30, P, 2).value == 3
        and psi_sieve(100, primes_up_to(100)).value == 100
        and psi_sieve(100, from_explicit([], bound_x=100)).value == 1
    )
    verdict(2, ok, "psi(30;{2,3,5})=18, psi_2=3, all-primes=x, empty=1")


def test_criterion_03_dickman():
    e2 = abs(dickman_rho(2.0) - (1 - math.log(2)))
    fine = DickmanTable.build(u_max=5.0, step=1e-5)
    e3 = abs(dickman_rho(3.0) - fine.rho(3.0))
    h, worst = 1e-5, 0.0
    checked = 0
    for i in range(130):
        u = 1.3 + i * 0.15
        if abs(u - round(u)) < 2 * h or checked >= 100:
            continue
        d = (dickman_rho(u + h) - dickman_rho(u - h)) / (2 * h)
        rel = abs(u * d + dickman_rho(u - 1)) / max(dickman_rho(u - 1), 1e-30)
        worst = max(worst, rel)
        checked += 1
    ok = e2 < 1e-9 and e3 < 1e-6 and worst <= 1e-6
    verdict(3, ok, f"|rho(2)-closed|={e2:.1e}, |rho(3)-fine|={e3:.1e}, "
                   f"ODE residual max {worst:.1e} over {checked} pts")


def test_criterion_04_hildebrand_extremal_family():
    t0 = time.time()
    x = 10**8
    results = []
    for num, den in ((1, 2), (2, 5), (1, 3)):  # u = 2, 2.5, 3
        u = den / num
        cut = int(float(x) ** (num / den)) + 2
        members = [int(p) for p in primes_up_to(cut).members
                   if int(p) ** den <= x**num]
        P = from_explicit(members, bound_x=x)
        dens = psi_sieve(x, P).value / x
        rho = dickman_rho(u)
        results.append((u, abs(dens - rho) / rho))
    elapsed = time.time() - t0
    ok = all(rel <= 0.15 for _, rel in results) and elapsed < 300
    detail = ", ".join(f"u={u}: {rel:.1%}" for u, rel in results)
    verdict(4, ok, f"{detail}; {elapsed:.0f}s")


def test_criterion_05_log_weight_sandwich():
    rng = np.random.default_rng(55)
    x = 10**6
    violations = 0
    for _ in range(50):
        P = random_prime_set(rng, x)
        E = complement_within(P, x)
        prod = E.euler_product()
        s = log_weight_sum(x, P).approx / math.log(x)
        if not (prod <= 1.1 * s and s <= 1.1 * E_GAMMA * prod):
            violations += 1
    verdict(5, violations == 0, f"50 random sets at x=1e6, {violations} violations")


def test_criterion_06_counterexample_decay():
    rep = run_counterexample_scan([10**5, 10**6, 10**7, 10**8], 3)
    ratios = [r["norm_ratio"] for r in rep.rows]
    ok = all(a > b for a, b in zip(ratios, ratios[1:]))
    verdict(6, ok, "norm ratios " + ", ".join(f"{r:.3f}" for r in ratios))


def test_criterion_07_thm71_counts():
    B = WeightedIntegerSet(12, 2, 2, (3, 4, 5))
    ok17 = thm71_count(B, 3) == 17
    rng = np.random.default_rng(77)
    mismatches = 0
    for _ in range(500):
        size = int(rng.integers(1, 9))
        A = sorted(rng.choice(np.arange(1, 30), size=size, replace=False).tolist())
        k = int(rng.integers(1, 5))
        cap = k * max(A)
        dp = rep_table(A, k, cap).counts
        brute = {}
        for tup in itertools.product(A, repeat=k):
            s = sum(tup)
            brute[s] = brute.get(s, 0) + 1
        if dp != brute:
            mismatches += 1
    verdict(7, ok17 and mismatches == 0,
            f"thm71({{3,4,5}},k=3)={'17' if ok17 else 'WRONG'}, "
            f"500 DP-vs-enumeration cases, {mismatches} mismatches")


def test_criterion_08_pigeonhole_guarantees():
    rng = np.random.default_rng(88)
    fails = 0
    # discrete window pigeonhole
    for _ in range(40):
        size = int(rng.integers(1, 6))
        B = sorted(rng.choice(np.arange(10, 40), size=size, replace=False).tolist())
        w = {b: Fraction(1, int(b)) for b in B}
        x = int(rng.integers(max(B), 2 * max(B)))
        y = float(min(B)) - 0.5
        _, _, beta = window_best_k(B, w, x, y=y, z=max(B))
        if not float(beta) >= y / x:
            fails += 1
    # prime products in a multiplicative window
    pool = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    done = 0
    while done < 30:
        sel = sorted(rng.choice(pool, size=int(rng.integers(2, 5)), replace=False).tolist())
        P = from_explicit(sel)
        x = int(rng.integers(50, 500))
        X = int(rng.integers(x // 2, 2 * x))
        try:
            ell, massv, K = prime_product_window(P, x, 1, 1, X)
        except ValueError:
            continue
        recip = sum(Fraction(1, p) for p in sel)
        if not massv >= recip**ell / K:
            fails += 1
        done += 1
    # continuous window pigeonhole
    for _ in range(30):
        a = int(rng.integers(24, 40))
        b = int(rng.integers(a + 8, 64))
        T = OpenIntervalSet.of((Fraction(a, 128), Fraction(b, 128)))
        wv = Fraction(int(rng.integers(1, 3)), 2)
        _, wmass, bound = window_search(T, wv, 2, 2, M=2000)
        if not wmass >= bound:
            fails += 1
    verdict(8, fails == 0, f"100 seeded cases across three guarantees, {fails} failures")


def test_criterion_09_gap_representation_bound():
    rng = np.random.default_rng(99)
    fails = 0
    for i in range(50):
        if i % 2 == 0:  # rank 1
            L1 = int(rng.integers(1, 9))
            P = GAParithmetic(int(rng.integers(-5, 6)), (int(rng.integers(1, 5)),), (L1,))
            delta = float(rng.uniform(1e-3, 1 / 6 - 1e-6))
        else:  # rank 2, properness by construction
            L1, L2 = int(rng.integers(1, 5)), int(rng.integers(1, 4))
            x1 = int(rng.integers(1, 4))
            x2 = x1 * (2 * L1 + 1) * int(rng.integers(1, 3))
            P = GAParithmetic(int(rng.integers(-5, 6)), (x1, x2), (L1, L2))
            delta = float(rng.uniform(1e-3, 1 / 36 - 1e-6))
        k = int(rng.integers(2, 4))
        rep = gap_rep_check(P, k, delta)
        if not (rep.precondition_ok and rep.min_ratio >= 1.0):
            fails += 1
    verdict(9, fails == 0, f"50 rank<=2 GAP cases, {fails} failures")


def test_criterion_10_continuous_engine():
    T = OpenIntervalSet.of((Fraction(3, 10), Fraction(6, 10)))
    truth = 2 * math.log(1.5)
    val, err = simplex_integral_conv(T, 2, M=10**5)
    conv_ok = abs(val - truth) < 1e-3
    est, se = simplex_integral_mc(T, 2, 10**6, seed=2024)
    mc_ok = abs(est - truth) <= 3 * se
    T2 = OpenIntervalSet.t_family(2)
    unreach = not reachable_one(T2, k_max=32).reachable
    zeros = all(simplex_integral_conv(T2, k, M=6000) == (0.0, 0.0) for k in (2, 3, 4))
    ok = conv_ok and mc_ok and unreach and zeros
    verdict(10, ok, f"conv err {abs(val - truth):.1e}, MC {abs(est - truth) / se:.2f} sigma, "
                    f"T_2 unreachable={unreach}, integral zero={zeros}")


def test_criterion_11_equivalence_pipeline():
    A = WeightedIntegerSet.full_interval(10**4, 2, 2)
    rep = run_hypothesis_pipeline(A)
    gap = rep.derived["alpha_tau_rel_gap"]
    A20 = WeightedIntegerSet.full_interval(20, 2, 2)
    rep20 = run_hypothesis_pipeline(A20)
    disc = rep20.derived["a_to_p_rel_discrepancy"]
    bound = rep20.derived["a_to_p_bound"]
    ok = gap <= 0.10 and disc <= bound
    verdict(11, ok, f"alpha/tau gap {gap:.2%} at N=1e4; "
                    f"A->P discrepancy {disc:.3f} <= {bound:.3f} at N=20")


def test_criterion_12_reproducibility():
    reps = [
        run_counterexample_scan([10**4, 10**5], 3),
        run_congruence_example(10**4, 5),
        run_friedlander_example(10**4, 2, 8),
        run_hypothesis_pipeline(WeightedIntegerSet.full_interval(100, 2, 2)),
    ]
    bad = [r.config["name"] for r in reps
           if replay(r.config).canonical_json() != r.canonical_json()]
    verdict(12, not bad, "replayed 4 drivers byte-identical"
            if not bad else f"divergent: {bad}")
