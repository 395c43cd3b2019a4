"""Command-line front end.

Exit codes: 0 success; 2 precondition failure (a hypothesis antecedent is
unmet, or the input is outside a checker's domain); 3 budget exhausted;
4 internal invariant violation (always a bug — please report).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .combinatorics import WeightedIntegerSet, hypA_check, hypP_check
from .continuous import OpenIntervalSet, hypT_check
from .counts import PSI_BUDGET, psi_sieve
from .dickman import benchmark, dickman_rho
from .errors import (
    AmbiguousBoundary,
    BudgetExceeded,
    InvalidResidue,
    SievelabError,
)
from .experiments import (
    ExperimentConfig,
    run_congruence_example,
    run_counterexample_scan,
    run_friedlander_example,
    run_hypothesis_pipeline,
)
from .primes import from_explicit, primes_up_to


def _parse_intervals(spec: str) -> OpenIntervalSet:
    """'1/3:1/2,2/3:1' -> open intervals with exact rational endpoints."""
    pairs = []
    for part in spec.split(","):
        a, _, b = part.partition(":")
        pairs.append((Fraction(a), Fraction(b)))
    return OpenIntervalSet.of(*pairs)


def _parse_prime_set(args):
    if args.p is not None:
        return from_explicit([int(v) for v in args.p.split(",")], bound_x=args.x)
    if args.p_upto:
        # allowed primes up to the cutoff, inside the universe [1, x]
        return from_explicit(primes_up_to(args.p_upto).members, bound_x=args.x)
    return primes_up_to(args.x)


def _emit(args, report) -> None:
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text)


def _apply_config_file(args) -> None:
    # key=value files fill in any option still at its default None
    if not getattr(args, "config", None):
        return
    cfg = ExperimentConfig.from_file(args.config)
    for k, v in cfg.params.items():
        if getattr(args, k, None) is None:
            setattr(args, k, v)
    if args.seed is None:
        args.seed = cfg.seed
    if args.budget is None:
        args.budget = cfg.budget


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sievelab")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--config", default=None)

    p = sub.add_parser("psi", help="exact survivor count")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--p", help="comma-separated explicit prime set")
    p.add_argument("--p-upto", type=int, dest="p_upto",
                   help="all primes up to this bound")
    common(p)

    p = sub.add_parser("benchmark", help="count vs classical predictions")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--p", help="comma-separated explicit prime set")
    p.add_argument("--p-upto", type=int, dest="p_upto")
    common(p)

    p = sub.add_parser("counterexample", help="power-interval family scan")
    p.add_argument("--x-list", required=True, dest="x_list")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--augmented", action="store_true")
    common(p)

    p = sub.add_parser("congruence", help="primes in one residue class")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, default=1)
    common(p)

    p = sub.add_parser("friedlander", help="medium+large prime family")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    common(p)

    p = sub.add_parser("hyp-a", help="integer-set hypothesis checker")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--elements", help="comma-separated; omit for full window")
    p.add_argument("--lambda2", type=float, default=0.0)
    common(p)

    p = sub.add_parser("hyp-p", help="prime-set hypothesis checker")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--p", required=True, help="comma-separated prime set")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--lambda1", type=float, default=0.0)
    common(p)

    p = sub.add_parser("hyp-t", help="open-interval hypothesis checker")
    p.add_argument("--intervals", required=True, help="e.g. 1/3:1/2,2/3:1")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--lambda3", type=float, default=0.0)
    p.add_argument("--M", type=int, default=10**4)
    common(p)

    p = sub.add_parser("pipeline", help="A -> T (-> P) equivalence run")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--elements", help="comma-separated; omit for full window")
    common(p)

    p = sub.add_parser("dickman", help="evaluate the smooth-density function")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    common(p)

    return ap


def _weighted_set(args) -> WeightedIntegerSet:
    u, v = Fraction(args.u), Fraction(args.v)
    if args.elements:
        elems = tuple(sorted(int(e) for e in args.elements.split(",")))
        return WeightedIntegerSet(args.N, u, v, elems)
    return WeightedIntegerSet.full_interval(args.N, u, v)


def _dispatch(args) -> int:
    budget = args.budget if getattr(args, "budget", None) else PSI_BUDGET
    if args.cmd == "psi":
        res = psi_sieve(args.x, _parse_prime_set(args), budget=budget)
        print(res.to_json())
        return 0
    if args.cmd == "benchmark":
        rep = benchmark(args.x, _parse_prime_set(args), budget=budget)
        print(rep.to_json() if args.format == "json" else rep.to_csv_row())
        return 0
    if args.cmd == "counterexample":
        xs = [int(v) for v in str(args.x_list).split(",")]
        _emit(args, run_counterexample_scan(xs, int(args.N),
                                            augmented=args.augmented, budget=budget))
        return 0
    if args.cmd == "congruence":
        _emit(args, run_congruence_example(args.x, args.q, a=args.a, budget=budget))
        return 0
    if args.cmd == "friedlander":
        _emit(args, run_friedlander_example(args.x, args.u, args.v, budget=budget))
        return 0
    if args.cmd == "hyp-a":
        rep = hypA_check(_weighted_set(args), args.lambda2)
        print(rep.to_json())
        return 0 if rep.satisfied_precondition else 2
    if args.cmd == "hyp-p":
        P = from_explicit([int(v) for v in args.p.split(",")], bound_x=args.x)
        rep = hypP_check(P, args.x, Fraction(args.u), Fraction(args.v),
                         Fraction(args.delta), args.lambda1)
        print(rep.to_json())
        return 0 if rep.satisfied_precondition else 2
    if args.cmd == "hyp-t":
        rep = hypT_check(_parse_intervals(args.intervals), Fraction(args.u),
                         Fraction(args.v), args.lambda3, M=args.M)
        print(rep.to_json())
        return 0 if rep.satisfied_precondition else 2
    if args.cmd == "pipeline":
        _emit(args, run_hypothesis_pipeline(_weighted_set(args)))
        return 0
    if args.cmd == "dickman":
        print(json.dumps({"u": args.u, "rho": dickman_rho(args.u, tol=args.tol)}))
        return 0
    raise AssertionError(f"unhandled subcommand {args.cmd}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_config_file(args)
        return _dispatch(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except (InvalidResidue, AmbiguousBoundary, ValueError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return 2
    except SievelabError as exc:
        print(f"invariant violation (bug): {exc}", file=sys.stderr)
        return 4
    except AssertionError as exc:  # pragma: no cover
        print(f"invariant violation (bug): {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
