"""Prime generation and the structured prime sets used throughout.

A PrimeSet is an immutable, sorted collection of primes <= bound_x together
with a descriptor recording how it was built.  The complement within the
primes <= x is the sieving set; the two always partition the primes <= x.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from math import fsum, isqrt

import numpy as np

from .constants import E_HI, E_LO
from .errors import AmbiguousBoundary, BudgetExceeded, InvalidResidue

PRIME_BUDGET = 2 * 10**9
SEGMENT_SIZE = 1 << 20

_base_cache: dict[int, np.ndarray] = {}


def _simple_sieve(n: int) -> np.ndarray:
    """Dense sieve of Eratosthenes; fine up to ~10^8."""
    if n in _base_cache:
        return _base_cache[n]
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    primes = np.nonzero(is_p)[0].astype(np.int64)
    if n <= 10**6:
        _base_cache[n] = primes
    return primes


def sieve_range(lo: int, hi: int) -> np.ndarray:
    """All primes in (lo, hi], segmented so only sqrt(hi) space is dense."""
    if hi <= lo or hi < 2:
        return np.empty(0, dtype=np.int64)
    if hi <= 10**8:
        primes = _simple_sieve(hi)
        return primes[primes > lo]
    base = _simple_sieve(isqrt(hi))
    out = []
    start = max(lo + 1, 2)
    for seg_lo in range(start, hi + 1, SEGMENT_SIZE):
        seg_hi = min(seg_lo + SEGMENT_SIZE - 1, hi)
        alive = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > seg_hi:
                break
            first = max(p * p, ((seg_lo + p - 1) // p) * p)
            alive[first - seg_lo :: p] = False
        vals = np.nonzero(alive)[0] + seg_lo
        out.append(vals[vals >= 2].astype(np.int64))
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)  # deterministic below 3.3e24


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3*10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _fnv1a64_py(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


try:  # numba makes checksumming multi-million-member sets practical
    from numba import njit

    @njit(cache=True)
    def _fnv1a64_nb(data):  # pragma: no cover - jitted
        h = np.uint64(0xCBF29CE484222325)
        prime = np.uint64(0x100000001B3)
        for i in range(data.shape[0]):
            h = np.uint64(h ^ np.uint64(data[i]))
            h = np.uint64(h * prime)
        return h

except ImportError:  # pragma: no cover
    _fnv1a64_nb = None


def fnv1a64(members: np.ndarray) -> int:
    """64-bit FNV-1a over the little-endian 8-byte member sequence."""
    arr = np.ascontiguousarray(np.asarray(members, dtype="<i8"))
    raw = arr.view(np.uint8)
    if _fnv1a64_nb is not None and raw.size > 4096:
        return int(_fnv1a64_nb(raw))
    return _fnv1a64_py(raw.tobytes())


@dataclass(frozen=True)
class PrimeSet:
    bound_x: int
    members: np.ndarray = field(repr=False)
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.members, dtype=np.int64)
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, p: int) -> bool:
        i = np.searchsorted(self.members, p)
        return i < len(self.members) and self.members[i] == p

    @property
    def checksum(self) -> int:
        return fnv1a64(self.members)

    def reciprocal_sum(self, lo: float | Fraction = 0, hi: float | Fraction | None = None):
        """Sum of 1/p over members in (lo, hi].

        Exact Fraction when the selected count is <= 10^4, otherwise a
        compensated float together with an error-bound report
        (value, bound) where |value - true| <= bound.
        """
        hi = self.bound_x if hi is None else hi
        if not lo < hi:
            raise ValueError("need lo < hi")
        m = self.members
        sel = m[(m > lo) & (m <= hi)]
        if len(sel) <= 10**4:
            return sum(Fraction(1, int(p)) for p in sel)
        val = fsum(1.0 / sel)
        bound = len(sel) * 2.3e-16 * val
        return val, bound

    def euler_product(self) -> float:
        """prod (1 - 1/p) via summed logs with extended-precision accumulation."""
        if len(self.members) == 0:
            return 1.0
        logs = np.log1p(-1.0 / self.members.astype(np.float64))
        return float(np.exp(np.sum(logs, dtype=np.longdouble)))

    def euler_product_exact(self) -> Fraction:
        if len(self.members) > 10**4:
            raise BudgetExceeded("exact Euler product limited to 10^4 members")
        out = Fraction(1)
        for p in self.members:
            p = int(p)
            out *= Fraction(p - 1, p)
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "bound_x": self.bound_x,
                "descriptor": self.descriptor,
                "count": len(self.members),
                "checksum": self.checksum,
            },
            sort_keys=True,
        )

    def member_dump(self) -> bytes:
        """Little-endian 64-bit delta encoding of the member sequence."""
        deltas = np.diff(self.members, prepend=np.int64(0))
        return struct.pack("<q", len(deltas)) + deltas.astype("<i8").tobytes()

    @staticmethod
    def from_member_dump(blob: bytes, bound_x: int, descriptor: dict | None = None) -> "PrimeSet":
        (n,) = struct.unpack_from("<q", blob)
        deltas = np.frombuffer(blob, dtype="<i8", offset=8, count=n)
        return PrimeSet(bound_x, np.cumsum(deltas), descriptor or {"kind": "explicit"})


def primes_up_to(x: int, budget: int = PRIME_BUDGET) -> PrimeSet:
    if x < 2:
        raise ValueError("x >= 2 required")
    if x > budget:
        raise BudgetExceeded(f"x={x} above prime budget {budget}")
    return PrimeSet(x, sieve_range(1, x), {"kind": "range", "lo": 1, "hi": x})


def from_explicit(members, bound_x: int | None = None) -> PrimeSet:
    m = np.asarray(sorted(set(int(v) for v in members)), dtype=np.int64)
    bx = bound_x if bound_x is not None else (int(m[-1]) if len(m) else 2)
    return PrimeSet(bx, m, {"kind": "explicit"})


def _below_power(primes: np.ndarray, x: int, num: int, den: int, strict: bool) -> np.ndarray:
    """Boolean mask primes < x^(num/den) (or <= if strict=False), decided by
    exact big-integer comparison p^den vs x^num."""
    # float prefilter, then exact check near the boundary only
    approx = float(x) ** (num / den)
    mask = primes.astype(np.float64) < approx * (1 + 1e-9)
    out = primes.astype(np.float64) < approx * (1 - 1e-9)
    near = np.nonzero(mask & ~out)[0]
    for i in near:
        p = int(primes[i])
        lhs, rhs = p**den, x**num
        out[i] = lhs < rhs if strict else lhs <= rhs
    return out


def from_power_intervals(x: int, N: int, augmented: bool = False) -> PrimeSet:
    """Primes in the union of (x^(m/(N+1)), x^(m/N)) for 1 <= m <= N-1,
    optionally together with all primes <= x^(1/N^2).

    Boundaries are strict on both sides and decided exactly.
    """
    if N < 2 or x < 2:
        raise ValueError("need N >= 2 and x >= 2")
    primes = primes_up_to(x).members
    keep = np.zeros(len(primes), dtype=bool)
    for m in range(1, N):
        above_lo = ~_below_power(primes, x, m, N + 1, strict=False)  # p > x^(m/(N+1))
        below_hi = _below_power(primes, x, m, N, strict=True)  # p < x^(m/N)
        keep |= above_lo & below_hi
    if augmented:
        keep |= _below_power(primes, x, 1, N * N, strict=False)
    return PrimeSet(
        x, primes[keep], {"kind": "power_intervals", "x": x, "N": N, "augmented": augmented}
    )


def from_congruence(x: int, q: int, a: int) -> PrimeSet:
    from math import gcd

    if q < 2:
        raise ValueError("q >= 2 required")
    if gcd(a, q) != 1:
        raise InvalidResidue(f"gcd({a},{q}) != 1")
    primes = primes_up_to(x).members
    sel = primes[primes % q == a % q]
    return PrimeSet(x, sel, {"kind": "congruence", "x": x, "q": q, "a": a % q})


def complement_within(P: PrimeSet, x: int) -> PrimeSet:
    if P.bound_x > x:
        raise ValueError("P.bound_x must be <= x")
    primes = primes_up_to(x).members
    mask = np.ones(len(primes), dtype=bool)
    idx = np.searchsorted(primes, P.members)
    mask[idx] = False
    return PrimeSet(x, primes[mask], {"kind": "complement", "of": P.descriptor, "within": x})


def primes_between_powers(
    x: int, lo_num: int, lo_den: int, hi_num: int, hi_den: int
) -> PrimeSet:
    """Primes p with x^(lo_num/lo_den) < p <= x^(hi_num/hi_den), exact bounds."""
    primes = primes_up_to(x if hi_num >= hi_den else int(float(x) ** (hi_num / hi_den)) + 2).members
    above = ~_below_power(primes, x, lo_num, lo_den, strict=False)
    below = _below_power(primes, x, hi_num, hi_den, strict=False)
    sel = primes[above & below]
    return PrimeSet(
        x, sel, {"kind": "power_range", "x": x, "lo": [lo_num, lo_den], "hi": [hi_num, hi_den]}
    )


def scaled_e_cutoff(scale: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of scale*e used for (N/ev)-style strict comparisons."""
    return scale * E_LO, scale * E_HI


def check_strict_above(value: Fraction, lo: Fraction, hi: Fraction, what: str = "") -> bool:
    """Decide value > c for an irrational c enclosed in (lo, hi); flag ties."""
    if value >= hi:
        return True
    if value <= lo:
        return False
    raise AmbiguousBoundary(f"{what}: {value} inside enclosure ({lo}, {hi})")
