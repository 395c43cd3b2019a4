"""Open interval sets with measure dt/t: exact reachability of 1 by finite
sums, simplex integrals by rigorous grid convolution and by Monte Carlo, and
the continuous window pigeonhole.

Openness is load-bearing: the extremal families live on boundary exclusion,
so all interval arithmetic here tracks open endpoints exactly (rational
endpoints, Fraction arithmetic).  Grid convolutions bracket the density
between staircases, which makes every reported integral carry a rigorous
error bar; the bracketing compares against the closure of the set, which is
harmless for integrals (boundaries have measure zero).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .constants import E_HI, E_LO
from .errors import IntervalBlowup, ResolutionTooCoarse
from .combinatorics import WeightedIntegerSet

COMPONENT_BUDGET = 10**6


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x).limit_denominator(10**12)


@dataclass(frozen=True)
class OpenIntervalSet:
    """Finite disjoint union of open subintervals of (0,1), rational endpoints."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def of(cls, *pairs) -> "OpenIntervalSet":
        ivs = sorted((_frac(a), _frac(b)) for a, b in pairs)
        for a, b in ivs:
            if not 0 < a < b <= 1:
                raise ValueError(f"need 0 < a < b <= 1, got ({a}, {b})")
        merged: list[list[Fraction]] = []
        for a, b in ivs:
            if merged and a < merged[-1][1]:  # strict overlap; touching stays split
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls(tuple((a, b) for a, b in merged))

    def __contains__(self, t) -> bool:
        t = _frac(t)
        return any(a < t < b for a, b in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def min_alpha(self) -> Fraction:
        return self.intervals[0][0]

    def mass_terms(self) -> list[Fraction]:
        return [b / a for a, b in self.intervals]

    def split_at(self, t) -> "OpenIntervalSet":
        """Split the interval containing t at t (t itself drops out)."""
        t = _frac(t)
        out = []
        for a, b in self.intervals:
            if a < t < b:
                out += [(a, t), (t, b)]
            else:
                out.append((a, b))
        return OpenIntervalSet(tuple(out))

    def to_json(self) -> str:
        return json.dumps(
            [
                {"num_a": a.numerator, "den_a": a.denominator,
                 "num_b": b.numerator, "den_b": b.denominator}
                for a, b in self.intervals
            ]
        )

    @classmethod
    def t_family(cls, N: int, clip_hi: Fraction | None = None) -> "OpenIntervalSet":
        """The extremal family union_j (j/(N+1), j/N), optionally clipped."""
        pairs = []
        for j in range(1, N + 1):
            a, b = Fraction(j, N + 1), Fraction(j, N)
            if clip_hi is not None:
                b = min(b, clip_hi)
            if a < b:
                pairs.append((a, b))
        return cls.of(*pairs)


def mass(T: OpenIntervalSet) -> float:
    """int_T dt/t = sum log(b_i/a_i)."""
    return math.fsum(math.log(r) for r in T.mass_terms())


# ---------------------------------------------------------------------------
# exact reachability of 1 (continuous postage stamp)


def _sum_components(S, T, budget: int) -> list[tuple[Fraction, Fraction]]:
    """Merge-normalized components of {s+t : s in S, t in T}, clipped to lo < 1."""
    raw = []
    for a, b in S:
        for c, d in T.intervals:
            lo, hi = a + c, b + d
            if lo < 1:  # sums beyond 1 can never come back down
                raw.append((lo, hi))
    raw.sort()
    merged: list[list[Fraction]] = []
    for lo, hi in raw:
        if merged and lo < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if len(merged) > budget:
        raise IntervalBlowup(f"{len(merged)} components exceed budget")
    return [(a, b) for a, b in merged]


@dataclass
class Reachability:
    reachable: bool
    k: int | None
    witness: tuple[Fraction, ...] | None
    k_max: int


def reachable_one(T: OpenIntervalSet, k_max: int = 64,
                  budget: int = COMPONENT_BUDGET) -> Reachability:
    """Decide exactly whether some t_1+...+t_k = 1 with all t_i in T, k <= k_max.

    The k-fold sumset of a finite union of open rational intervals is again
    such a union; 1 is reachable iff it is interior to one of them.
    """
    if k_max > 64:
        raise ValueError("k_max <= 64 required")
    if T.is_empty():
        return Reachability(False, None, None, k_max)
    one = Fraction(1)
    layers: list[list[tuple[Fraction, Fraction]]] = []
    S = [(a, b) for a, b in T.intervals if a < 1]
    for k in range(1, k_max + 1):
        layers.append(S)
        if any(a < one < b for a, b in S):
            return Reachability(True, k, _witness(T, layers, one), k_max)
        if not S:
            break
        S = _sum_components(S, T, budget)
    return Reachability(False, None, None, k_max)


def _witness(T: OpenIntervalSet, layers, target: Fraction) -> tuple[Fraction, ...]:
    """Back-construct rational t_1..t_k in T with exact sum `target`."""
    k = len(layers)
    picks: list[Fraction] = []
    s = target
    for j in range(k, 1, -1):
        prev = layers[j - 2]
        done = False
        for a, b in T.intervals:
            for c, d in prev:
                lo, hi = max(c, s - b), min(d, s - a)
                if lo < hi:
                    s_new = (lo + hi) / 2
                    picks.append(s - s_new)
                    s = s_new
                    done = True
                    break
            if done:
                break
        assert done, "witness back-construction failed"
    assert s in T
    picks.append(s)
    return tuple(reversed(picks))


# ---------------------------------------------------------------------------
# grid convolution of the density 1_T(t)/t


def _staircase_bounds(T: OpenIntervalSet, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-bin lower/upper staircases for 1_T(t)/t on bins [i/M, (i+1)/M)."""
    h = Fraction(1, M)
    lo = np.zeros(M)
    hi = np.zeros(M)
    for a, b in T.intervals:
        i_first = int(a / h)  # first bin intersecting (a, b)
        i_last = int(b / h) if b % h != 0 else int(b / h) - 1
        for i in range(i_first, min(i_last, M - 1) + 1):
            bl, br = h * i, h * (i + 1)
            cover_lo = max(bl, a)
            full = a <= bl and br <= b
            if full:
                lo[i] = max(lo[i], 1.0 / float(br))
            hi[i] = max(hi[i], 1.0 / float(cover_lo) if cover_lo > 0 else math.inf)
    return lo, hi


def _convolve(a: np.ndarray, b: np.ndarray, out_len: int) -> np.ndarray:
    if len(a) * len(b) <= 4 * 10**7:
        return np.convolve(a, b)[:out_len]
    from scipy.signal import fftconvolve

    c = fftconvolve(a, b)[:out_len]
    c[c < 0] = 0.0
    return c


def _conv_bracket(T: OpenIntervalSet, k: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid values bracketing the k-fold dt/t self-convolution on [0, 1].

    Staircase*staircase is exact at grid points; each round re-brackets the
    piecewise-linear result by min/max over adjacent grid values.
    """
    glo, ghi = _staircase_bounds(T, M)
    h = 1.0 / M
    flo_s, fhi_s = glo.copy(), ghi.copy()  # staircase bin values
    alpha, beta = float(T.intervals[0][0]), float(T.intervals[-1][1])
    fft_slack = 0.0
    for j in range(k - 1):
        # values at grid points m*h of the convolved lower/upper functions
        vlo = np.concatenate(([0.0], _convolve(flo_s, glo, M) * h))
        vhi = np.concatenate(([0.0], _convolve(fhi_s, ghi, M) * h))
        # the (j+2)-fold sum is supported in ((j+2)*alpha, (j+2)*beta):
        # clear fft roundoff leaking outside it
        lo_i = int((j + 2) * alpha * M)
        hi_i = math.ceil((j + 2) * beta * M) + 1
        vlo[:lo_i] = 0.0
        vhi[:lo_i] = 0.0
        if hi_i < len(vlo):
            vlo[hi_i:] = 0.0
            vhi[hi_i:] = 0.0
        if len(flo_s) * len(glo) > 4 * 10**7:
            fft_slack += float(vhi.max()) * 1e-12
        if j == k - 2:
            vhi[vhi > 0] += fft_slack
            return vlo, vhi
        # re-bracket the piecewise-linear functions by staircases
        flo_s = np.minimum(vlo[:-1], vlo[1:])
        fhi_s = np.maximum(vhi[:-1], vhi[1:])
    # k == 1: grid values of the density itself
    vlo = np.concatenate(([0.0], flo_s))
    vhi = np.concatenate(([0.0], fhi_s))
    return vlo, vhi


def simplex_integral_conv(T: OpenIntervalSet, k: int, M: int = 10**4,
                          tol: float | None = None) -> tuple[float, float]:
    """The simplex integral of dt_1..dt_{k-1}/(t_1...t_k) over t_i in T with
    sum 1; returned as (value, error_bar), rigorously bracketed."""
    if k < 2:
        raise ValueError("k >= 2 required")
    if M < 10**3:
        raise ValueError("M >= 10^3 required")
    if T.is_empty():
        return 0.0, 0.0
    vlo, vhi = _conv_bracket(T, k, M)
    lo, hi = float(vlo[M]), float(vhi[M])
    val, err = (lo + hi) / 2, (hi - lo) / 2
    if tol is not None and err > tol:
        raise ResolutionTooCoarse(f"error bar {err:.3g} exceeds tol {tol:.3g} at M={M}")
    return val, err


def simplex_integral_mc(T: OpenIntervalSet, k: int, samples: int,
                        seed: int) -> tuple[float, float]:
    """Monte Carlo companion estimate: importance-sample t_1..t_{k-1} from
    normalized dt/t on T, weight by 1_T(t_k)/t_k at t_k = 1 - sum.

    Returns (estimate, standard_error); deterministic per seed.
    """
    if k < 2:
        raise ValueError("k >= 2 required")
    if T.is_empty():
        return 0.0, 0.0
    rng = np.random.default_rng(seed)
    a = np.array([float(x) for x, _ in T.intervals])
    b = np.array([float(y) for _, y in T.intervals])
    w = np.log(b / a)
    m_total = w.sum()
    probs = w / m_total
    vals = np.zeros(samples)
    tsum = np.zeros(samples)
    for _ in range(k - 1):
        idx = rng.choice(len(a), size=samples, p=probs)
        u = rng.random(samples)
        t = a[idx] * (b[idx] / a[idx]) ** u  # log-uniform within the interval
        tsum += t
    tk = 1.0 - tsum
    inside = np.zeros(samples, dtype=bool)
    for ai, bi in zip(a, b):
        inside |= (tk > ai) & (tk < bi)
    vals = np.where(inside, 1.0 / np.where(inside, tk, 1.0), 0.0)
    scale = m_total ** (k - 1)
    mean = float(vals.mean()) * scale
    stderr = float(vals.std(ddof=1)) / math.sqrt(samples) * scale
    return mean, stderr


# ---------------------------------------------------------------------------
# hypothesis T checker and the continuous window search


@dataclass
class HypTReport:
    satisfied_precondition: bool
    mass: float
    k: int | None = None
    integral: float | None = None
    error_bar: float | None = None
    implied_tau: float | None = None

    def to_json(self) -> str:
        return json.dumps(
            {"precondition": self.satisfied_precondition, "mass": self.mass,
             "k": self.k, "integral": self.integral, "error_bar": self.error_bar,
             "implied_tau": self.implied_tau},
            sort_keys=True,
        )


def hypT_check(T: OpenIntervalSet, u, v, lambda3: float, M: int = 10**4) -> HypTReport:
    """Scan integer k in [u, ev] for the largest simplex integral; report the
    implied tau_v = integral / mass^k."""
    u, v = Fraction(u), Fraction(v)
    lo_lib, lo_cons = Fraction(1) / (E_HI * v), Fraction(1) / (E_LO * v)
    for a, b in T.intervals:
        if a < lo_lib or b * u > 1:
            raise ValueError("T must sit inside [1/(ev), 1/u]")
        if a < lo_cons:
            from .errors import AmbiguousBoundary

            raise AmbiguousBoundary(f"left endpoint {a} inside the 1/(ev) enclosure")
    m = mass(T)
    precondition = m >= (1 + lambda3) / float(u)
    k_lo = max(2, math.ceil(u))
    k_hi = int(v * E_LO)
    best = None
    for k in range(k_lo, k_hi + 1):
        val, err = simplex_integral_conv(T, k, M)
        tau = val / m**k
        if best is None or tau > best[3]:
            best = (k, val, err, tau)
    if best is None:
        return HypTReport(precondition, m, None, 0.0, 0.0, 0.0)
    k, val, err, tau = best
    return HypTReport(precondition, m, k, val, err, tau)


def window_search(T: OpenIntervalSet, w, u, v, M: int = 10**4):
    """Continuous pigeonhole: find ell <= e*v*w whose ell-fold dt/t convolution puts mass
    at least mass(T)^ell/(evw) in the window (w - 1/v, w].

    Returns (ell, window_mass, bound).
    """
    u, v, w = Fraction(u), Fraction(v), Fraction(w)
    if w < 1 / v:
        raise ValueError("w >= 1/v required")
    ell_max = int(E_LO * v * w)
    m = mass(T)
    h = 1.0 / M
    best = None
    lo_edge, hi_edge = float(w - 1 / v), float(w)
    for ell in range(1, ell_max + 1):
        # certified lower bound on the window mass of the ell-fold convolution
        if ell == 1:  # exact: mass of T intersected with the window
            wmass = math.fsum(
                math.log(min(float(b), hi_edge) / max(float(a), lo_edge))
                for a, b in T.intervals
                if max(float(a), lo_edge) < min(float(b), hi_edge)
            )
        else:
            grid_lo, _ = _conv_bracket(T, ell, M)
            xs = np.arange(len(grid_lo)) * h
            sel = (xs > lo_edge) & (xs <= hi_edge)
            wmass = float(np.trapezoid(grid_lo[sel], dx=h)) if sel.sum() > 1 else 0.0
        norm = wmass / m**ell
        if best is None or norm > best[3]:
            best = (ell, wmass, m**ell / (float(E_HI) * float(v) * float(w)), norm)
    return best[0], best[1], best[2]


# ---------------------------------------------------------------------------
# discretization transforms (Hypothesis A <-> T)


def t_to_a(T: OpenIntervalSet, N: int, u, v) -> tuple[WeightedIntegerSet, dict]:
    """A = union_i {a : alpha_i*N + 2ev < a < beta_i*N - 2ev}; empty shrunken
    intervals contribute nothing (reported)."""
    u, v = Fraction(u), Fraction(v)
    pad_hi = 2 * E_HI * v  # conservative outward rounding of the 2ev pad
    elems: list[int] = []
    empty = 0
    for a, b in T.intervals:
        lo_cut = a * N + pad_hi
        hi_cut = b * N - pad_hi
        first = math.floor(lo_cut) + 1
        last = math.ceil(hi_cut) - 1  # largest integer strictly below hi_cut
        if first > last:
            empty += 1
            continue
        elems.extend(range(first, last + 1))
    A = WeightedIntegerSet(N, u, v, tuple(elems))
    sum_a = float(A.reciprocal_sum())
    report = {
        "empty_intervals": empty,
        "mass_T": mass(T),
        "sum_recip_a": sum_a,
        "discrepancy": abs(mass(T) - sum_a),
    }
    return A, report


def a_to_t(A: WeightedIntegerSet) -> tuple[OpenIntervalSet, dict]:
    """T = union_a (a/N, (a+1)/N)."""
    N = A.N
    T = OpenIntervalSet.of(*((Fraction(a, N), Fraction(a + 1, N)) for a in A.elements))
    sum_a = float(A.reciprocal_sum())
    report = {"mass_T": mass(T), "sum_recip_a": sum_a,
              "discrepancy": abs(mass(T) - sum_a)}
    return T, report
