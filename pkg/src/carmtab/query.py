"""Decide whether ``n = P*R`` is a Carmichael number when ``P`` is known.

Each base runs one ladder that yields both the Fermat residue
``a**(n-1) mod n`` and the strong sequence ``a**(d*2**i)``.  A Fermat
failure rejects ``n`` at once.  A nontrivial square root of 1 splits the
unresolved part of ``R``; every prime uncovered this way is checked
against Korselt's conditions as soon as it appears.  After
``base_budget`` bases the remaining cofactors are factored by rho, so the
default configuration never answers "undecided".
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterator

from .arith import Factorization, korselt_check, pow_mod_strong
from .counters import Counters
from .preproduct import Preproduct
from .primes import is_prime, pollard_factor, small_primes


class Reason(enum.Enum):
    FERMAT_WITNESS = "fermat-witness"
    NOT_SQUAREFREE = "not-squarefree"
    KORSELT_DIVISIBILITY = "korselt-divisibility"
    INADMISSIBLE_FACTOR = "inadmissible-factor"
    FACTOR_TOO_SMALL = "factor-too-small"
    PRIME = "prime"


class QueryVerdict:
    is_carmichael = False


@dataclass(frozen=True)
class Carmichael(QueryVerdict):
    factorization: Factorization
    is_carmichael = True


@dataclass(frozen=True)
class NotCarmichael(QueryVerdict):
    reason: Reason
    witness: int = 0


@dataclass(frozen=True)
class Undecided(QueryVerdict):
    bases_tried: int


@dataclass
class QueryConfig:
    base_budget: int = 64
    random_bases: bool = False
    seed: int = 0
    fallback: bool = True
    screen_limit: int = 1000


@dataclass
class PartialSplit:
    """Pairwise coprime parts of ``n``: confirmed primes and composite cofactors."""

    n: int
    pending: list[int] = field(default_factory=list)
    confirmed: list[int] = field(default_factory=list)

    def product(self) -> int:
        out = 1
        for v in self.pending + self.confirmed:
            out *= v
        return out


def refine_split(split: PartialSplit, x: int) -> PartialSplit:
    """Split pending cofactors with a nontrivial square root ``x`` of 1 mod n."""
    n = split.n
    if x * x % n != 1 or x % n in (1, n - 1):
        raise ValueError("x must be a nontrivial square root of 1 modulo n")
    return _refine(split, x)


def _refine(split: PartialSplit, x: int) -> PartialSplit:
    pending, confirmed = [], list(split.confirmed)
    for c in split.pending:
        g = gcd(x - 1, c)
        parts = (g, c // g) if 1 < g < c else (c,)
        for part in parts:
            (confirmed if is_prime(part) else pending).append(part)
    return PartialSplit(split.n, pending, confirmed)


def _bases(n: int, config: QueryConfig) -> Iterator[int]:
    if config.random_bases:
        rng = random.Random(config.seed * 1000003 + n)
        while True:
            a = rng.randrange(2, n - 1)
            if gcd(a, n) == 1:
                yield a
    q = 1
    while True:
        q += 1
        if is_prime(q) and n % q:
            yield q


def _local_roots(seq: list[int], c: int) -> int | None:
    """From a strong sequence mod n, a nontrivial square root of 1 mod ``c``."""
    prev = None
    for x in seq:
        xc = x % c
        if xc == 1:
            if prev is not None and prev not in (1, c - 1):
                return prev
            return None
        prev = xc
    return None


def is_carmichael(
    n: int,
    known: Preproduct,
    floor_bound: int = 1,
    base_budget: int | None = None,
    config: QueryConfig | None = None,
    stats: Counters | None = None,
) -> QueryVerdict:
    """Is ``n`` a Carmichael number whose cofactor ``n / P`` has primes ``> floor_bound``?"""
    config = config or QueryConfig()
    stats = stats if stats is not None else Counters()
    budget = config.base_budget if base_budget is None else base_budget
    P = known.P
    if n < 2 or n % P:
        raise ValueError(f"{P} does not divide {n}")
    R = n // P
    if R == 1:
        if korselt_check(n, known.primes):
            return Carmichael(Factorization.from_primes(known.primes))
        if len(known.primes) == 1:
            return NotCarmichael(Reason.PRIME, n)
        return NotCarmichael(Reason.KORSELT_DIVISIBILITY, known.p)
    if n % 2 == 0:
        if n == 2:
            return NotCarmichael(Reason.PRIME, 2)
        # (n-1)**(n-1) = -1 mod n for even n > 2
        return NotCarmichael(Reason.FERMAT_WITNESS, n - 1)

    bases = _bases(n, config)
    a = next(bases)
    stats.ladders += 1
    seq = pow_mod_strong(a, n - 1, n)
    if seq[-1] != 1:
        stats.fermat_rejects += 1
        return NotCarmichael(Reason.FERMAT_WITNESS, a)

    if P == 1 and is_prime(n):
        return NotCarmichael(Reason.PRIME, n)
    for q in known.primes:
        if (n - 1) % (q - 1):
            return NotCarmichael(Reason.KORSELT_DIVISIBILITY, q)
        if R % q == 0:
            return NotCarmichael(Reason.NOT_SQUAREFREE, q)

    split = PartialSplit(n, [], list(known.primes))
    checked = set(known.primes)

    def vet(f: int) -> NotCarmichael | None:
        if f <= floor_bound:
            return NotCarmichael(Reason.FACTOR_TOO_SMALL, f)
        if n % (f * f) == 0:
            return NotCarmichael(Reason.NOT_SQUAREFREE, f)
        for g in checked:
            if (g - 1) % f == 0 or (f - 1) % g == 0:
                return NotCarmichael(Reason.INADMISSIBLE_FACTOR, f)
        if (n - 1) % (f - 1):
            return NotCarmichael(Reason.KORSELT_DIVISIBILITY, f)
        checked.add(f)
        return None

    def absorb(new: PartialSplit) -> NotCarmichael | None:
        for f in new.confirmed:
            if f not in checked:
                bad = vet(f)
                if bad:
                    return bad
        for c in new.pending:
            r = isqrt(c)
            if r * r == c:
                return NotCarmichael(Reason.NOT_SQUAREFREE, r)
        return None

    # trial screen for small factors of R
    stats.factor_ops += 1
    rest = R
    for f in small_primes(config.screen_limit):
        if f * f > rest:
            break
        if rest % f == 0:
            bad = vet(f)
            if bad:
                return bad
            split.confirmed.append(f)
            rest //= f
    if rest > 1:
        (split.confirmed if is_prime(rest) else split.pending).append(rest)
    bad = absorb(split)
    if bad:
        return bad

    tried = 1
    while split.pending:
        # nontrivial roots modulo n, then modulo each pending cofactor
        before = len(split.pending), len(split.confirmed)
        stats.factor_ops += 1
        for i in range(1, len(seq)):
            if seq[i] == 1 and seq[i - 1] not in (1, n - 1):
                split = _refine(split, seq[i - 1])
                break
        for c in list(split.pending):
            y = _local_roots(seq, c)
            if y is not None:
                part = PartialSplit(n, [c], [])
                part = _refine(part, y)
                split = PartialSplit(
                    n,
                    [v for v in split.pending if v != c] + part.pending,
                    split.confirmed + part.confirmed,
                )
        if (len(split.pending), len(split.confirmed)) != before:
            bad = absorb(split)
            if bad:
                return bad
        if not split.pending:
            break
        if tried >= budget:
            if not config.fallback:
                return Undecided(tried)
            stats.fallbacks += 1
            primes = []
            for c in split.pending:
                primes += list(pollard_factor(c).primes)
                stats.factor_ops += 1
            for f in sorted(primes):
                if primes.count(f) > 1:
                    return NotCarmichael(Reason.NOT_SQUAREFREE, f)
                bad = vet(f)
                if bad:
                    return bad
            split = PartialSplit(n, [], split.confirmed + primes)
            break
        a = next(bases)
        tried += 1
        stats.ladders += 1
        seq = pow_mod_strong(a, n - 1, n)
        if seq[-1] != 1:
            stats.fermat_rejects += 1
            return NotCarmichael(Reason.FERMAT_WITNESS, a)

    primes = sorted(split.confirmed)
    if not korselt_check(n, primes):
        # unreachable when every part passed the checks above
        raise AssertionError(f"inconsistent verdict for {n}")
    return Carmichael(Factorization.from_primes(primes))
