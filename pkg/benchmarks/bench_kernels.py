"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import sys
import time

from carmtab import _pykernels
from carmtab.preproduct import Preproduct, r_star
from carmtab.primes import sieve_primes

try:
    from carmtab import _kernels
except ImportError:
    sys.exit("compiled extension not built; run pip install -e . first")


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases():
    rng = random.Random(1)
    triples = [(rng.randrange(1 << 63), rng.randrange(1 << 63), rng.randrange(3, 1 << 63) | 1) for _ in range(20000)]

    def powmod(mod):
        return lambda: [mod.powmod64(a, e, m) for a, e, m in triples]

    pre = Preproduct.from_primes([7, 13, 19])
    mask = bytearray(b"\x01") * 200000

    def fermat(mod):
        return lambda: list(mod.fermat_filter(pre.P, r_star(pre), pre.lam, 0, mask))

    primes = list(sieve_primes(4000).primes)

    def korselt(mod):
        return lambda: list(mod.korselt_segment(10**7, 10**7 + (1 << 20), primes))

    return [
        ("powmod64 x20000", powmod),
        ("fermat_filter 2e5 k", fermat),
        ("korselt_segment 2^20 at 1e7", korselt),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':30} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, make in cases():
        tp, a = best_of(make(_pykernels), args.repeat)
        tc, b = best_of(make(_kernels), args.repeat)
        assert a == b, name
        print(f"{name:30} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
