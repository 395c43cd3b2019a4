"""End-to-end experiment drivers: the named counterexample families, the
classical-prediction comparisons, and the hypothesis equivalence pipeline.

Reports split into a canonical part (config echo, rows, derived values;
serialized with sorted keys and no timing data) and volatile metadata.
Re-running a report's echoed config must reproduce the canonical bytes
exactly; the test suite enforces this.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .combinatorics import (
    WeightedIntegerSet,
    a_to_primes,
    hypA_check,
    hypP_check,
)
from .constants import E_GAMMA
from .continuous import OpenIntervalSet, a_to_t, hypT_check, mass
from .counts import PSI_BUDGET, psi_sieve, survivors
from .dickman import benchmark, dickman_rho, u_of
from .errors import ExplosionGuard
from .primes import (
    PrimeSet,
    complement_within,
    from_congruence,
    from_power_intervals,
    primes_between_powers,
)

SCHEMA_VERSION = 1


@dataclass
class ExperimentConfig:
    name: str
    params: dict
    seed: int = 0
    budget: int = PSI_BUDGET
    out_dir: str | None = None
    fmt: str = "json"

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """Parse a flat key=value file; `name` is required, everything else
        lands in params except the reserved keys seed/budget/out/format."""
        kv: dict[str, str] = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                k, _, v = line.partition("=")
                kv[k.strip()] = v.strip()
        name = kv.pop("name")
        seed = int(kv.pop("seed", "0"))
        budget = int(float(kv.pop("budget", str(PSI_BUDGET))))
        out_dir = kv.pop("out", None)
        fmt = kv.pop("format", "json")
        return cls(name, kv, seed=seed, budget=budget, out_dir=out_dir, fmt=fmt)

    def echo(self) -> dict:
        return {
            "name": self.name,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "seed": self.seed,
            "budget": self.budget,
        }


@dataclass
class ExperimentReport:
    config: dict
    rows: list[dict]
    derived: dict
    checksums: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def canonical_json(self) -> str:
        return json.dumps(
            {
                "schema": SCHEMA_VERSION,
                "library": __version__,
                "config": self.config,
                "rows": self.rows,
                "derived": self.derived,
                "checksums": self.checksums,
            },
            sort_keys=True,
        )

    def to_json(self) -> str:
        body = json.loads(self.canonical_json())
        body["elapsed_seconds"] = self.elapsed
        return json.dumps(body, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            w = csv.DictWriter(buf, fieldnames=sorted(self.rows[0].keys()))
            w.writeheader()
            for r in self.rows:
                w.writerow(r)
        return buf.getvalue()

    def write(self, path: str, fmt: str = "json") -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() if fmt == "json" else self.to_csv())


def _norm_ratio(psi: int, x: int, uP: float) -> float:
    return psi * math.log(x) * uP / x


def run_counterexample_scan(x_list, N: int, augmented: bool = False,
                            budget: int = PSI_BUDGET) -> ExperimentReport:
    """Survivor counts for the power-interval families across x; the
    normalized ratio psi*log(x)*u_P/x exposes the deficit against the
    expected x/u_P."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig(
        "counterexample",
        {"x_list": ",".join(str(x) for x in x_list), "N": N, "augmented": augmented},
        budget=budget,
    )
    rows = []
    checksums = {}
    for x in x_list:
        P = from_power_intervals(int(x), N, augmented=augmented)
        res = psi_sieve(int(x), P, budget=budget)
        uP = u_of(P, int(x))
        rows.append(
            {
                "x": int(x),
                "psi": res.value,
                "u_P": uP,
                "expected": x / uP,
                "norm_ratio": _norm_ratio(res.value, int(x), uP),
            }
        )
        checksums[str(int(x))] = res.set_checksum
    ratios = [r["norm_ratio"] for r in rows]
    derived = {
        "strictly_decreasing": all(a > b for a, b in zip(ratios, ratios[1:])),
    }
    return ExperimentReport(cfg.echo(), rows, derived, checksums,
                            time.perf_counter() - t0)


def run_congruence_example(x: int, q: int, a: int = 1, u: float = 10.0,
                           grid_points: int = 12,
                           budget: int = PSI_BUDGET) -> ExperimentReport:
    """Psi(t;P)/t for P = {p = a mod q} across a geometric t-grid in
    [x^(1/u), x], against the Euler product over the sieving primes <= t."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig(
        "congruence", {"x": x, "q": q, "a": a, "u": u, "grid_points": grid_points},
        budget=budget,
    )
    P = from_congruence(x, q, a)
    surv = survivors(x, P, budget=budget)
    E = complement_within(P, x).members
    t_lo = x ** (1.0 / u)
    ts = np.unique(np.geomspace(t_lo, x, grid_points).astype(np.int64))
    rows = []
    for t in ts:
        t = int(t)
        count = int(np.searchsorted(surv, t, side="right"))
        Et = E[E <= t].astype(np.float64)
        prod = float(np.exp(np.sum(np.log1p(-1.0 / Et)))) if len(Et) else 1.0
        rows.append(
            {
                "t": t,
                "psi": count,
                "density": count / t,
                "sieve_product": prod,
                "density_over_product": (count / t) / prod,
            }
        )
    derived = {
        "max_density_over_product": max(r["density_over_product"] for r in rows),
        "prime_count": len(P),
    }
    return ExperimentReport(cfg.echo(), rows, derived,
                            {"P": P.checksum}, time.perf_counter() - t0)


def run_friedlander_example(x: int, u: int, v: int,
                            budget: int = PSI_BUDGET) -> ExperimentReport:
    """P = {x^(1/v) < p <= x^(1/u)} U {x^(1-1/v) < p <= x}: the measured
    survivor ratio against the u*rho(u)*(1-1/v) prediction."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig("friedlander", {"x": x, "u": u, "v": v}, budget=budget)
    mid = primes_between_powers(x, 1, v, 1, u)
    big = primes_between_powers(x, v - 1, v, 1, 1)
    members = np.union1d(mid.members, big.members)
    P = PrimeSet(x, members, {"kind": "friedlander", "x": x, "u": u, "v": v})
    res = psi_sieve(x, P, budget=budget)
    uP = u_of(P, x)
    expected = x / uP
    measured = res.value / expected
    predicted = u * dickman_rho(float(u)) * (1.0 - 1.0 / v)
    rows = [
        {
            "x": x,
            "psi": res.value,
            "u_P": uP,
            "measured_ratio": measured,
            "predicted_ratio": predicted,
            "rel_deviation": abs(measured / predicted - 1.0) if predicted else math.inf,
        }
    ]
    return ExperimentReport(cfg.echo(), rows, {"prime_count": len(P)},
                            {"P": P.checksum}, time.perf_counter() - t0)


def run_benchmark(x: int, P: PrimeSet, budget: int = PSI_BUDGET) -> ExperimentReport:
    t0 = time.perf_counter()
    cfg = ExperimentConfig("benchmark", {"x": x, "descriptor": json.dumps(P.descriptor)},
                           budget=budget)
    rep = benchmark(x, P, budget=budget)
    rows = [json.loads(rep.to_json())]
    return ExperimentReport(cfg.echo(), rows, {}, {"P": P.checksum},
                            time.perf_counter() - t0)


def _clip_to_window(T: OpenIntervalSet, u: Fraction) -> tuple[OpenIntervalSet, float]:
    """Intersect T with (0, 1/u]; returns the clipped set and the mass lost.

    The A->T discretization can overshoot the top of the admissible window by
    one lattice cell; hypothesis checking wants the clean window.
    """
    cap = Fraction(1) / Fraction(u)
    kept = []
    for a, b in T.intervals:
        if a >= cap:
            continue
        kept.append((a, min(b, cap)))
    T2 = OpenIntervalSet.of(*kept) if kept else OpenIntervalSet(())
    return T2, mass(T) - mass(T2)


def run_hypothesis_pipeline(A: WeightedIntegerSet, lambda2: float = 0.0,
                            lambda3: float = 0.0, M: int | None = None,
                            delta: Fraction = Fraction(1, 2),
                            budget: int = 10**8,
                            p_node_budget: int = 2 * 10**6) -> ExperimentReport:
    """Run an A instance through its checker, transform to T (and to P when
    N <= 21) and run those checkers; report the implied constants together."""
    t0 = time.perf_counter()
    N, u, v = A.N, A.u, A.v
    cfg = ExperimentConfig(
        "pipeline",
        {"N": N, "u": str(u), "v": str(v), "count": len(A.elements),
         "lambda2": lambda2, "lambda3": lambda3},
        budget=budget,
    )
    rows: list[dict] = []
    derived: dict = {}

    repA = hypA_check(A, lambda2, budget=budget)
    rows.append({"side": "A", **json.loads(repA.to_json())})
    derived["alpha"] = repA.implied_alpha

    T_raw, disc = a_to_t(A)
    T, clipped = _clip_to_window(T_raw, u)
    if M is None:
        M = max(10**4, 10 * N)  # grid aligned with the 1/N lattice
    repT = hypT_check(T, u, v, lambda3, M=M)
    rows.append({"side": "T", **json.loads(repT.to_json())})
    derived["tau"] = repT.implied_tau
    derived["a_to_t_discrepancy"] = disc["discrepancy"]
    derived["clipped_mass"] = clipped
    if repA.implied_alpha and repT.implied_tau:
        derived["alpha_tau_rel_gap"] = abs(repA.implied_alpha / repT.implied_tau - 1.0)

    if N <= 21:
        P, discP = a_to_primes(A)
        x = P.bound_x
        sum_p = P.reciprocal_sum(0, x)
        if isinstance(sum_p, tuple):
            sum_p = sum_p[0]
        derived["a_to_p_rel_discrepancy"] = discP["rel_discrepancy"]
        derived["a_to_p_bound"] = 5.0 * float(v) ** 2 / N
        try:
            repP = hypP_check(P, x, u, v, delta, 0.0, node_budget=p_node_budget)
            rows.append({"side": "P", **json.loads(repP.to_json())})
            derived["pi"] = repP.implied_pi
        except ExplosionGuard:
            derived["pi"] = None
            derived["p_side_status"] = "node-budget-exceeded"
    return ExperimentReport(cfg.echo(), rows, derived, {},
                            time.perf_counter() - t0)


def replay(config_echo: dict) -> ExperimentReport:
    """Re-run an experiment from the config echoed in its report.

    The canonical JSON of the replayed report must be byte-identical to the
    original's; the test suite asserts this for every driver.
    """
    name = config_echo["name"]
    p = config_echo["params"]
    budget = config_echo["budget"]
    if name == "counterexample":
        return run_counterexample_scan(
            [int(v) for v in p["x_list"].split(",")], int(p["N"]),
            augmented=p["augmented"] == "True", budget=budget,
        )
    if name == "congruence":
        return run_congruence_example(
            int(p["x"]), int(p["q"]), a=int(p["a"]), u=float(p["u"]),
            grid_points=int(p["grid_points"]), budget=budget,
        )
    if name == "friedlander":
        return run_friedlander_example(int(p["x"]), int(p["u"]), int(p["v"]),
                                       budget=budget)
    if name == "pipeline":
        A = WeightedIntegerSet.full_interval(int(p["N"]), Fraction(p["u"]),
                                             Fraction(p["v"]))
        if int(p["count"]) != len(A.elements):
            raise ValueError("pipeline replay supports full-interval instances only")
        return run_hypothesis_pipeline(A, lambda2=float(p["lambda2"]),
                                       lambda3=float(p["lambda3"]), budget=budget)
    raise ValueError(f"unknown experiment {name!r}")
