"""Prime tables, interval factoring, primality testing and rho factoring.

Primality policy
----------------
``is_prime`` is exact for every ``n < 3317044064679887385961981`` (about
3.3e24, which covers the whole supported range ``n < 2**81``): after trial
division by the primes below 50 it runs strong-probable-prime tests to the
thirteen prime bases 2, 3, ..., 41, a set proven sufficient below that
bound.  Smaller inputs use the shorter proven base sets in
``MR_BASES``.  Above the bound, twenty extra random bases are added and the
verdict carries an error probability below ``4**-20``.
"""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import lru_cache
from itertools import compress
from math import gcd, isqrt

from .arith import Factorization

# (exclusive bound, bases): strong tests to these bases are a proof of primality
MR_BASES = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
    (3825123056546413051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318665857834031151167461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (3317044064679887385961981, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)
DETERMINISTIC_LIMIT = MR_BASES[-1][0]
EXTRA_RANDOM_BASES = 20

SIEVE_LIMIT_BUDGET = 2 * 10**9
INTERVAL_BUDGET = 1 << 24

_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class BudgetError(MemoryError):
    """Requested table or window exceeds the configured memory budget."""


def _sieve_bytes(limit: int) -> bytearray:
    flags = bytearray([1]) * (limit + 1)
    flags[0] = 0
    if limit >= 1:
        flags[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return flags


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit`` in ascending order."""

    limit: int
    primes: tuple[int, ...]

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __contains__(self, n):
        i = bisect_left(self.primes, n)
        return i < len(self.primes) and self.primes[i] == n

    def between(self, lo: int, hi: int) -> tuple[int, ...]:
        """Primes ``q`` with ``lo < q <= hi``."""
        if hi > self.limit:
            raise ValueError(f"table only reaches {self.limit}, asked for {hi}")
        return self.primes[bisect_right(self.primes, lo) : bisect_right(self.primes, hi)]


def sieve_primes(limit: int, budget: int = SIEVE_LIMIT_BUDGET) -> PrimeTable:
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if limit > budget:
        raise BudgetError(f"prime table to {limit} exceeds budget {budget}")
    flags = _sieve_bytes(limit)
    return PrimeTable(limit, tuple(compress(range(limit + 1), flags)))


@lru_cache(maxsize=8)
def _cached_table(limit: int) -> PrimeTable:
    return sieve_primes(limit)


def small_primes(limit: int) -> tuple[int, ...]:
    """Primes up to ``limit`` from a shared cache (table rounded up to 2**k)."""
    size = 1 << max(10, (max(limit, 2) - 1).bit_length())
    table = _cached_table(size)
    return table.primes[: bisect_right(table.primes, limit)]


@dataclass(frozen=True)
class FactoredInterval:
    lo: int
    hi: int
    entries: tuple[Factorization, ...]

    def __getitem__(self, n: int) -> Factorization:
        if not self.lo <= n <= self.hi:
            raise KeyError(n)
        return self.entries[n - self.lo]


def factor_interval(lo: int, hi: int, budget: int = INTERVAL_BUDGET) -> FactoredInterval:
    """Factor every integer in ``[lo, hi]`` by segmented sieving."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    if hi >= 1 << 64:
        raise ValueError("interval must lie below 2**64")
    if hi - lo + 1 > budget:
        raise BudgetError(f"window of {hi - lo + 1} exceeds budget {budget}")
    size = hi - lo + 1
    rest = list(range(lo, hi + 1))
    found: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    for p in small_primes(isqrt(hi)):
        start = -lo % p
        for i in range(start, size, p):
            v, e = rest[i], 0
            while v % p == 0:
                v //= p
                e += 1
            rest[i] = v
            found[i].append((p, e))
    entries = []
    for i, v in enumerate(rest):
        pairs = found[i]
        if v > 1:
            pairs.append((v, 1))
        entries.append(Factorization(lo + i, tuple(pairs)))
    return FactoredInterval(lo, hi, tuple(entries))


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    if n < 53 * 53:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for bound, bases in MR_BASES:
        if n < bound:
            return all(_strong_probable_prime(n, a, d, s) for a in bases)
    bases = list(MR_BASES[-1][1])
    rng = random.Random(n)
    bases += [rng.randrange(2, n - 1) for _ in range(EXTRA_RANDOM_BASES)]
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    q = max(n + 1, 2)
    while not is_prime(q):
        q += 1
    return q


def _brent(n: int, rng: random.Random) -> int:
    """One Brent-style rho attempt; returns a divisor of n (possibly n)."""
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split(n: int, rng: random.Random) -> int:
    r = isqrt(n)
    if r * r == n:
        return r
    while True:
        g = _brent(n, rng)
        if 1 < g < n:
            return g


TRIAL_LIMIT = 1000


def pollard_factor(n: int, seed: int = 0) -> Factorization:
    """Complete factorization: trial division, then rho with retries."""
    if n < 1:
        raise ValueError("n must be positive")
    out: list[int] = []
    for p in small_primes(TRIAL_LIMIT):
        if p * p > n:
            break
        while n % p == 0:
            out.append(p)
            n //= p
    if n > 1:
        rng = random.Random(seed)
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out.append(m)
                continue
            g = _split(m, rng)
            stack += [g, m // g]
    return Factorization.from_primes(out)


def divisors(f: Factorization) -> list[int]:
    """All positive divisors of ``f.value``, ascending."""
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisor_count(f: Factorization) -> int:
    c = 1
    for _, e in f.factors:
        c *= e + 1
    return c
