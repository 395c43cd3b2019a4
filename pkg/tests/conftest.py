import numpy as np
import pytest

from sievelab.primes import from_explicit, primes_up_to


@pytest.fixture(scope="session")
def factor_matrix():
    """Padded distinct-prime-factor table for n <= 10^5, built from a
    smallest-prime-factor sieve — an oracle independent of the sieve engines."""
    LIMIT = 10**5
    spf = np.zeros(LIMIT + 1, dtype=np.int64)
    for p in range(2, LIMIT + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    # hand-rolled on purpose: the production code never builds spf tables
    rows = np.zeros((LIMIT + 1, 7), dtype=np.int64)
    for n in range(2, LIMIT + 1):
        m, j = n, 0
        last = 0
        while m > 1:
            p = int(spf[m])
            if p != last:
                rows[n, j] = p
                j += 1
                last = p
            m //= p
    return rows


def brute_psi(x, P, rows):
    """#{n <= x : every prime factor of n is in P}, from the factor table."""
    members = np.asarray(P.members)
    sub = rows[1 : x + 1]
    in_p = np.isin(sub, members) | (sub == 0)
    return int(np.count_nonzero(in_p.all(axis=1)))


def random_prime_set(rng, x):
    primes = primes_up_to(x).members
    density = rng.uniform(0.1, 0.9)
    keep = rng.random(len(primes)) < density
    return from_explicit(primes[keep], bound_x=x)
