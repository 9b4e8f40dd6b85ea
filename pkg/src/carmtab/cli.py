"""Command-line driver: ``tabulate``, ``check``, ``jobs`` and ``verify``.

Exit codes: 0 success (or "is Carmichael", or "files agree"), 1 negative
answer or runtime failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager

from .completion import SieveConfig
from .preproduct import Preproduct, PreproductError, generate_jobs, read_jobs, write_jobs
from .primes import BudgetError
from .query import Carmichael, QueryConfig, Reason, Undecided, is_carmichael
from .records import read_results, write_results
from .tabulate import STRATEGIES, default_crossover, run

MAX_BOUND = 10**24


class UsageError(Exception):
    pass


def parse_decimal(text: str, name: str = "value") -> int:
    """Non-negative decimal integer, digits only (no sign, exponent or underscores)."""
    text = text.strip()
    if not text.isdigit() or not text.isascii():
        raise UsageError(f"{name} must be a decimal integer, got {text!r}")
    return int(text)


def parse_bound(text: str) -> int:
    B = parse_decimal(text, "bound")
    if not 2 <= B <= MAX_BOUND:
        raise UsageError(f"bound must lie in [2, 10^24], got {B}")
    return B


def parse_shard(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    i, sep, m = text.partition("/")
    if not sep:
        raise UsageError(f"shard must look like i/m, got {text!r}")
    i, m = parse_decimal(i, "shard index"), parse_decimal(m, "shard count")
    if not 0 <= i < m:
        raise UsageError(f"shard index must satisfy 0 <= i < m, got {text}")
    return i, m


@contextmanager
def _output(path: str | None, mode: str = "w"):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, mode) as fh:
            yield fh


def _query_config(args) -> QueryConfig:
    cfg = QueryConfig()
    if args.base_budget is not None:
        if args.base_budget < 1:
            raise UsageError("--base-budget must be positive")
        cfg.base_budget = args.base_budget
    if args.seed is not None:
        cfg.random_bases, cfg.seed = True, args.seed
    return cfg


def _crossover(args, B: int) -> int:
    X = default_crossover(B) if args.crossover is None else parse_decimal(args.crossover, "crossover")
    if not 2 <= X <= B:
        raise UsageError("crossover must satisfy 2 <= X <= bound")
    return X


# -- commands ----------------------------------------------------------------


def cmd_tabulate(args) -> int:
    B = parse_bound(args.bound)
    X = _crossover(args, B)
    shard = parse_shard(args.shard)
    sieve = SieveConfig(query=_query_config(args))
    if args.sieve_cap is not None:
        sieve.square_cap = sieve.product_cap = args.sieve_cap
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    if not 0 < args.delta < 0.5:
        raise UsageError("--delta must lie in (0, 1/2)")

    jobs, small = None, True
    if args.jobs_file or shard:
        if args.strategy not in ("hybrid", "pinch-levels"):
            raise UsageError("--jobs-file and --shard apply to the recursive strategies only")
        if args.jobs_file:
            with open(args.jobs_file) as fh:
                jobs = read_jobs(fh)
        else:
            jobs = generate_jobs(B, X)
        if shard:
            jobs = jobs.shard(*shard)
            # the three-prime pass is not split; shard 0 carries it
            small = shard[0] == 0

    result = run(
        B,
        X,
        strategy=args.strategy,
        workers=args.workers,
        delta=args.delta,
        sieve=sieve,
        jobs=jobs,
        small_case=small,
    )
    summary = result.summary()
    if shard:
        summary["shard"] = f"{shard[0]}/{shard[1]}"
    with _output(args.out) as fh:
        write_results(result.records, fh, summary)
    if args.out:
        print(f"{len(result.records)} records written to {args.out}", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    n = parse_decimal(args.n, "n")
    if n < 2:
        print("not-carmichael unit")
        return 1
    v = is_carmichael(n, Preproduct.one(), 1, config=_query_config(args))
    if isinstance(v, Carmichael):
        print("carmichael " + " ".join(map(str, v.factorization.primes)))
        return 0
    if isinstance(v, Undecided):
        print(f"undecided after {v.bases_tried} bases")
        return 1
    if v.reason is Reason.PRIME:
        print("not-carmichael prime")
    else:
        print(f"not-carmichael {v.reason.value} {v.witness}")
    return 1


def cmd_jobs(args) -> int:
    B = parse_bound(args.bound)
    X = _crossover(args, B)
    jobs = generate_jobs(B, X)
    shard = parse_shard(args.shard)
    if shard:
        jobs = jobs.shard(*shard)
    with _output(args.out) as fh:
        fh.write(f"# bound={B} crossover={X}" + (f" shard={shard[0]}/{shard[1]}" if shard else "") + "\n")
        write_jobs(jobs, fh)
    return 0


def cmd_verify(args) -> int:
    sets = []
    for path in (args.a, args.b):
        with open(path) as fh:
            sets.append({rec.n: rec.primes for rec in read_results(fh)})
    a, b = sets
    if a == b:
        print(f"identical: {len(a)} records")
        return 0
    for n in sorted(a.keys() | b.keys()):
        if a.get(n) != b.get(n):
            fa = " ".join(map(str, a[n])) if n in a else "missing"
            fb = " ".join(map(str, b[n])) if n in b else "missing"
            print(f"first divergence at {n}: {args.a}: {fa}; {args.b}: {fb}")
            break
    return 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carmtab", description="Tabulate Carmichael numbers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def query_flags(p):
        p.add_argument("--base-budget", type=int, help="bases tried before the rho fallback (default 64)")
        p.add_argument("--seed", type=int, help="use seeded random bases instead of the small primes")

    t = sub.add_parser("tabulate", help="list all Carmichael numbers below a bound")
    t.add_argument("--bound", required=True, help="exclusive upper bound B (decimal, <= 10^24)")
    t.add_argument("--crossover", help="crossover X (default: nearest integer to B^(1/3))")
    t.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    t.add_argument("--delta", type=float, default=0.2, help="level exponent of the optimal strategy")
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--out", help="result file (default stdout)")
    t.add_argument("--jobs-file", help="run only the jobs listed in this file")
    t.add_argument("--shard", help="run every m-th job starting at i, written i/m")
    t.add_argument("--sieve-cap", type=int, help="cap on the prime-square and q(2q+1) sieve rules")
    query_flags(t)
    t.set_defaults(func=cmd_tabulate)

    c = sub.add_parser("check", help="decide whether n is a Carmichael number")
    c.add_argument("n")
    query_flags(c)
    c.set_defaults(func=cmd_check)

    j = sub.add_parser("jobs", help="write the job file for a bound")
    j.add_argument("--bound", required=True)
    j.add_argument("--crossover")
    j.add_argument("--shard")
    j.add_argument("--out")
    j.set_defaults(func=cmd_jobs)

    v = sub.add_parser("verify", help="compare two result files")
    v.add_argument("a")
    v.add_argument("b")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"carmtab: error: {e}", file=sys.stderr)
        return 2
    except (BudgetError, PreproductError, ValueError, OSError) as e:
        print(f"carmtab: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
