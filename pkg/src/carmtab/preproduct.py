"""Cyclic preproducts ``(P, lambda(P), b)`` and the job partition built from them.

A preproduct is a squarefree product of odd primes, pairwise admissible, so
``P`` is cyclic and ``gcd(P, lambda(P)) = 1``.  Primes appended to it must
strictly exceed the append bound ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm, prod
from typing import Iterable, Iterator, TextIO

from .primes import PrimeTable, pollard_factor, small_primes


class PreproductError(ValueError):
    pass


@dataclass(frozen=True)
class Preproduct:
    P: int
    lam: int
    primes: tuple[int, ...] = ()
    b: int = 1

    def __post_init__(self):
        if prod(self.primes) != self.P:
            raise PreproductError(f"primes {self.primes} do not multiply to {self.P}")
        if self.lam != lcm(1, *(q - 1 for q in self.primes)):
            raise PreproductError(f"lambda mismatch for P={self.P}")
        if gcd(self.P, self.lam) != 1:
            raise PreproductError(f"P={self.P} is not cyclic")

    @property
    def p(self) -> int:
        """Largest prime of P (1 for the empty preproduct)."""
        return self.primes[-1] if self.primes else 1

    @classmethod
    def one(cls, b: int = 1) -> Preproduct:
        return cls(1, 1, (), b)

    @classmethod
    def from_primes(cls, primes: Iterable[int], b: int | None = None) -> Preproduct:
        """Build from ascending odd primes; ``b`` defaults to the largest."""
        ps = tuple(primes)
        if list(ps) != sorted(set(ps)):
            raise PreproductError("primes must be distinct and ascending")
        if any(q == 2 for q in ps):
            raise PreproductError("2 never divides a Carmichael number")
        if b is None:
            b = ps[-1] if ps else 1
        return cls(prod(ps), lcm(1, *(q - 1 for q in ps)), ps, b)

    def with_bound(self, b: int) -> Preproduct:
        return Preproduct(self.P, self.lam, self.primes, b)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.P, self.lam, self.b)


def is_admissible(q: int, pre: Preproduct) -> bool:
    """Whether appending the prime ``q`` to ``pre`` keeps it cyclic."""
    return pre.P % q != 0 and gcd(q - 1, pre.P) == 1


def r_star(pre: Preproduct) -> int:
    """Least positive residue of ``P**-1 mod lambda(P)``."""
    if pre.lam == 1:
        return 1
    try:
        r = pow(pre.P, -1, pre.lam)
    except ValueError:
        raise PreproductError(f"P={pre.P} not invertible mod {pre.lam}") from None
    return r or pre.lam


def extend(pre: Preproduct, q: int) -> Preproduct:
    """Append the prime ``q``; the new append bound is ``q`` itself."""
    if q <= pre.b:
        raise PreproductError(f"q={q} must exceed the append bound {pre.b}")
    if q == 2 or not is_admissible(q, pre):
        raise PreproductError(f"q={q} is not admissible to P={pre.P}")
    return Preproduct(pre.P * q, lcm(pre.lam, q - 1), pre.primes + (q,), q)


def _cyclic_below(limit: int) -> Iterator[Preproduct]:
    """Every cyclic odd squarefree P < limit (P > 1), depth first, bound b = p."""
    ps = small_primes(max(limit - 1, 2))
    ps = [q for q in ps if q != 2]

    def walk(pre: Preproduct, start: int):
        for i in range(start, len(ps)):
            q = ps[i]
            if pre.P * q >= limit:
                break
            if is_admissible(q, pre):
                child = extend(pre, q)
                yield child
                yield from walk(child, i + 1)

    yield from walk(Preproduct.one(), 0)


def cyclic_preproducts(limit: int) -> list[Preproduct]:
    """All cyclic odd squarefree ``P`` with ``1 < P < limit``, ascending by P."""
    return sorted(_cyclic_below(limit), key=lambda pre: pre.P)


@dataclass
class JobSet:
    jobs: list[Preproduct] = field(default_factory=list)

    def __iter__(self):
        return iter(self.jobs)

    def __len__(self):
        return len(self.jobs)

    def shard(self, i: int, m: int) -> JobSet:
        """Every ``m``-th job starting at index ``i``."""
        if not 0 <= i < m:
            raise ValueError("shard index out of range")
        return JobSet(self.jobs[i::m])


def job_bound(P: int, p: int, X: int) -> int:
    """Integer append bound ``max(ceil(X/P) - 1, p)``.

    Any admissible ``q > b`` gives ``P*q >= X``, so the first appended prime
    lands outside the job set ``P < X``.  A product equal to ``X`` belongs
    to the large side; with ``floor(X/P)`` it would belong to neither.
    """
    return max((X - 1) // P, p)


def generate_jobs(B: int, X: int) -> JobSet:
    """Jobs ``(P, lambda(P), job_bound(P, p, X))`` for cyclic ``P < X`` with ``P*p**3 < B``.

    Includes the trivial job ``P = 1`` with ``b = X - 1``, so every appended
    prime is at least ``X``.  Ascending by ``P``.
    """
    if not 2 <= X <= B:
        raise ValueError("need 2 <= X <= B")
    jobs = [Preproduct.one(b=X - 1)]
    for pre in cyclic_preproducts(X):
        if pre.P * pre.p**3 < B:
            jobs.append(pre.with_bound(job_bound(pre.P, pre.p, X)))
    return JobSet(jobs)


def enumerate_smooth_cyclic(
    lo: int,
    hi: int,
    smooth_bound: int,
    B: int,
    *,
    primes: PrimeTable | None = None,
    minimal: bool = False,
) -> Iterator[Preproduct]:
    """Cyclic odd squarefree ``P`` in ``(lo, hi]`` with every prime ``<= smooth_bound``.

    Built prime by prime in ascending-prime order, so each ``P`` appears once.
    A node with ``P*lambda(P) > B`` is not extended further; it is emitted
    even when ``P <= lo``, because sieving it with ``b = p`` already covers
    every Carmichael multiple its descendants could have.  With
    ``minimal=True`` an in-range node is emitted and not extended either,
    which yields a covering set with no redundant descendants.
    """
    if lo >= hi:
        raise ValueError("need lo < hi")
    if primes is None:
        ps = small_primes(smooth_bound)
    else:
        ps = primes.between(1, smooth_bound)
    ps = [q for q in ps if q != 2]

    def walk(pre: Preproduct, start: int):
        for i in range(start, len(ps)):
            q = ps[i]
            if pre.P * q > hi:
                break
            if not is_admissible(q, pre):
                continue
            child = extend(pre, q)
            if child.P * child.lam > B:
                yield child
                continue
            if child.P > lo:
                yield child
                if minimal:
                    continue
            yield from walk(child, i + 1)

    yield from walk(Preproduct.one(), 0)


def preproduct_from_P(P: int, lam: int | None = None, b: int | None = None) -> Preproduct:
    """Recover a preproduct from its value by factoring ``P``."""
    if P == 1:
        return Preproduct.one(b if b is not None else 1)
    f = pollard_factor(P)
    if not f.squarefree:
        raise PreproductError(f"P={P} is not squarefree")
    pre = Preproduct.from_primes(f.primes, b)
    if lam is not None and lam != pre.lam:
        raise PreproductError(f"lambda {lam} does not match P={P}")
    return pre


def write_jobs(jobs: Iterable[Preproduct], out: TextIO) -> int:
    n = 0
    for pre in jobs:
        out.write(f"{pre.P} {pre.lam} {pre.b}\n")
        n += 1
    return n


def read_jobs(src: TextIO) -> JobSet:
    jobs = []
    for lineno, line in enumerate(src, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(" ")
        if len(fields) != 3:
            raise PreproductError(f"line {lineno}: expected 'P lambda b'")
        P, lam, b = (int(x) for x in fields)
        jobs.append(preproduct_from_P(P, lam, b))
    return JobSet(jobs)

