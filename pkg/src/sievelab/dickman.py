"""Dickman-de Bruijn rho and the classical prediction benchmarks.

rho solves the delay equation u*rho'(u) = -rho(u-1) with rho = 1 on [0,1].
Rather than stepping the ODE we integrate the equivalent per-interval form

    rho(u) = rho(n) - int_n^u rho(t-1)/t dt,   u in [n, n+1],

on a uniform grid, which keeps the delay term exact in structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .constants import E_GAMMA
from .counts import psi_sieve
from .errors import ToleranceUnreachable
from .primes import PrimeSet, complement_within

U_MAX = 50.0


@dataclass
class DickmanTable:
    step: float
    u_max: float
    values: np.ndarray = field(repr=False)
    _splines: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, u_max: float = U_MAX, step: float = 1e-4) -> "DickmanTable":
        spu = round(1.0 / step)
        if abs(spu * step - 1.0) > 1e-12:
            raise ValueError("step must divide 1 exactly")
        n_units = int(np.ceil(u_max))
        rho = np.ones(n_units * spu + 1, dtype=np.float64)
        t_unit = np.arange(spu + 1, dtype=np.float64) * step
        for n in range(1, n_units):
            t = n + t_unit
            g = rho[(n - 1) * spu : n * spu + 1] / t
            cs = cumulative_simpson(g, dx=step, initial=0.0)
            rho[n * spu : (n + 1) * spu + 1] = rho[n * spu] - cs
        return cls(step=step, u_max=float(n_units), values=rho)

    def _segment_spline(self, n: int) -> CubicSpline:
        # per-unit-interval splines: rho' jumps at u=1 and rho'' at u=2, so a
        # global spline would smear across the knots
        if n not in self._splines:
            spu = round(1.0 / self.step)
            lo, hi = n * spu, min((n + 1) * spu, len(self.values) - 1)
            xs = np.arange(lo, hi + 1) * self.step
            self._splines[n] = CubicSpline(xs, self.values[lo : hi + 1])
        return self._splines[n]

    def rho(self, u: float) -> float:
        if u < 0:
            raise ValueError("u >= 0 required")
        if u <= 1.0:
            return 1.0
        if u > self.u_max:
            raise ValueError(f"u={u} beyond tabulated range {self.u_max}")
        n = min(int(u), int(self.u_max) - 1)
        return float(self._segment_spline(n)(u))

    def rho_prime(self, u: float) -> float:
        if u < 1.0:
            return 0.0
        n = min(int(u), int(self.u_max) - 1)
        return float(self._segment_spline(n).derivative()(u))


_tables: dict[float, DickmanTable] = {}


def _table_for(tol: float, u_need: float) -> DickmanTable:
    step = 1e-4 if tol >= 1e-9 else 2e-5
    tab = _tables.get(step)
    if tab is None or tab.u_max < u_need:
        u_max = max(10.0, float(np.ceil(u_need)))
        tab = DickmanTable.build(u_max=u_max, step=step)
        _tables[step] = tab
    return tab


def dickman_rho(u: float, tol: float = 1e-9) -> float:
    if not 0 <= u <= U_MAX:
        raise ValueError("0 <= u <= 50 required")
    if tol < 1e-12:
        raise ToleranceUnreachable("tol >= 1e-12 required")
    return _table_for(tol, u).rho(u)


def u_of(P: PrimeSet, x: int) -> float:
    """1/prod_{p in E}(1-1/p), the expected-density reciprocal; >= 1."""
    E = complement_within(P, x)
    return 1.0 / E.euler_product()


@dataclass(frozen=True)
class PredictionReport:
    x: int
    u_P: float
    expected: float
    hall_upper: float
    hildebrand_lower: float
    observed: int
    ratio: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "x": self.x,
                "u_P": self.u_P,
                "expected": self.expected,
                "hall_upper": self.hall_upper,
                "hildebrand_lower": self.hildebrand_lower,
                "observed": self.observed,
                "ratio": self.ratio,
            },
            sort_keys=True,
        )

    def to_csv_row(self) -> str:
        return (f"{self.x},{self.u_P:.12g},{self.expected:.12g},{self.hall_upper:.12g},"
                f"{self.hildebrand_lower:.12g},{self.observed},{self.ratio:.12g}")


def benchmark(x: int, P: PrimeSet, budget: int = 10**9) -> PredictionReport:
    """Observed survivor count against the expected density, the upper
    benchmark e^gamma/u_P, and the lower benchmark rho(u_P)."""
    uP = u_of(P, x)
    expected = x / uP
    observed = psi_sieve(x, P, budget=budget).value
    hildebrand = x * dickman_rho(min(uP, U_MAX))
    return PredictionReport(
        x=x,
        u_P=uP,
        expected=expected,
        hall_upper=E_GAMMA / uP * x,
        hildebrand_lower=hildebrand,
        observed=observed,
        ratio=observed / expected if expected > 0 else 0.0,
    )
