"""Orchestration: the hybrid recursion, the three-set optimal search, the oracle.

Interval endpoints are exact integers.  The integer crossover ``X`` acts
as the real ``X - 1/2``, so every product is strictly on one side of it.
With ``c = icbrt(B // P)``:

* ``q <= (B/P)**(1/3)``  iff  ``q <= c``
* ``q >  (B/P)**(1/3)``  iff  ``q >= c + 1``
* ``q <  (B/P)**(1/2)``  iff  ``P*q*q < B``  iff  ``q <= isqrt((B - 1) // P)``
* ``P*q > X - 1/2``      iff  ``q > (X - 1) // P``
* ``P > X - 1/2``        iff  ``P >= X``, and ``P > p(X - 1/2)`` iff ``P >= p*X``
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable

from . import _accel
from .arith import icbrt
from .cd_method import tabulate_small_case
from .completion import SieveConfig, lambda_sieve, single_prime_completion
from .counters import Counters
from .preproduct import (
    Preproduct,
    enumerate_smooth_cyclic,
    extend,
    generate_jobs,
    is_admissible,
)
from .primes import BudgetError, PrimeTable, sieve_primes
from .records import CarmichaelRecord, merge

log = logging.getLogger(__name__)

STRATEGIES = ("bruteforce", "pinch-levels", "hybrid", "optimal")
ORACLE_BUDGET = 10**9
ORACLE_SEGMENT = 1 << 20


@dataclass
class TabulationResult:
    B: int
    X: int | None
    strategy: str
    records: list[CarmichaelRecord]
    counters: Counters = field(default_factory=Counters)
    delta: float | None = None

    @property
    def numbers(self) -> list[int]:
        return [rec.n for rec in self.records]

    def summary(self) -> dict:
        out = {"bound": self.B, "strategy": self.strategy}
        if self.X is not None:
            out["crossover"] = self.X
        if self.delta is not None:
            out["delta"] = self.delta
        out.update(self.counters.as_dict())
        return out


def default_crossover(B: int) -> int:
    """``B**(1/3)`` rounded to the nearest integer, at least 2."""
    r = icbrt(B)
    if (r + 1) ** 3 - B < B - r**3:
        r += 1
    return min(max(r, 2), B)


# -- brute force -------------------------------------------------------------


def _oracle_primes(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[:2] = b"\x00\x00"[: limit + 1]
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i in range(limit + 1) if flags[i]]


def _trial_factor(n: int, primes: list[int]) -> tuple[int, ...]:
    out = []
    for p in primes:
        if p * p > n:
            break
        while n % p == 0:
            out.append(p)
            n //= p
    if n > 1:
        out.append(n)
    return tuple(out)


def brute_force_oracle(B: int, segment: int = ORACLE_SEGMENT) -> TabulationResult:
    """Every Carmichael ``n < B`` by checking Korselt's criterion on each integer.

    Segmented: each window is factored by the primes up to ``sqrt(B)``.
    Shares no code with the search strategies.
    """
    if B > ORACLE_BUDGET:
        raise BudgetError(f"oracle bound {B} exceeds {ORACLE_BUDGET}")
    primes = _oracle_primes(max(isqrt(max(B - 1, 1)), 2))
    found = []
    for lo in range(0, B, segment):
        found += _accel.korselt_segment(lo, min(lo + segment, B), primes)
    records = [CarmichaelRecord(n, _trial_factor(n, primes)) for n in found]
    return TabulationResult(B, None, "bruteforce", records)


# -- hybrid ------------------------------------------------------------------


@dataclass
class SearchContext:
    B: int
    X: int
    primes: PrimeTable
    sieve: SieveConfig = field(default_factory=SieveConfig)
    counters: Counters = field(default_factory=Counters)
    force: str | None = None

    @classmethod
    def create(cls, B: int, X: int, sieve: SieveConfig | None = None, force: str | None = None):
        if force not in (None, "sieve", "recurse"):
            raise ValueError(f"unknown branch {force!r}")
        table = sieve_primes(max(isqrt(B), 2))
        return cls(B, X, table, sieve or SieveConfig(), Counters(), force)


def hybrid(pre: Preproduct, B: int, X: int, ctx: SearchContext | None = None) -> list[CarmichaelRecord]:
    """Carmichael ``n = P*R < B`` with at least three primes in ``R``, all above ``pre.b``.

    Branch one lambda-sieves ``P``; branch two appends primes one at a time,
    recursing while three or more primes may still fit and finishing with
    single prime completion.  ``ctx.force`` pins the branch choice.
    """
    ctx = ctx or SearchContext.create(B, X)
    P, lam, p = pre.P, pre.lam, pre.p
    branch = ctx.force or ("sieve" if P * lam * lam > B else "recurse")
    if branch == "sieve":
        return lambda_sieve(pre, B, ctx.sieve, ctx.counters)

    out = []
    lo = max(pre.b, p, (X - 1) // P)
    c = icbrt(B // P)
    for q in ctx.primes.between(lo, c):
        if q != 2 and is_admissible(q, pre):
            out += hybrid(extend(pre, q), B, X, ctx)
    if P >= X:
        s = isqrt((B - 1) // P)
        for q in ctx.primes.between(max(lo, c), s):
            if q != 2 and is_admissible(q, pre):
                out += single_prime_completion(extend(pre, q), B, counters=ctx.counters)
        if P >= p * X:
            out += single_prime_completion(pre, B, counters=ctx.counters)
    return out


# -- optimal -----------------------------------------------------------------


def _optimal_plan(B: int, delta: float, base_floor: int, primes: PrimeTable):
    """Oracle bound plus the lambda-sieve preproducts for every level.

    Each level splits ``n < B`` at ``U = B // S`` with ``S = floor(B**delta)``:
    ``n <= U`` recurses; larger ``n`` either has a prime ``>= S`` (sieve that
    prime with no bound on the other primes) or is ``(S-1)``-smooth and so has
    a cyclic prefix in ``(U // S, U]`` (sieve a covering set of those).
    """
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    tasks: list[tuple[int, Preproduct]] = []
    while B > base_floor:
        S = max(int(B**delta), 3)
        U = B // S
        for P in primes.between(S - 1, isqrt(B)):
            tasks.append((B, Preproduct(P, P - 1, (P,), 1)))
        for pre in enumerate_smooth_cyclic(U // S, U, S - 1, B, minimal=True):
            tasks.append((B, pre))
        log.debug("optimal level B=%d S=%d U=%d", B, S, U)
        B = U + 1
    return B, tasks


def optimal(B: int, delta: float = 0.2, base_floor: int = 10**4, **kw) -> TabulationResult:
    return run(B, strategy="optimal", delta=delta, base_floor=base_floor, **kw)


# -- driver ------------------------------------------------------------------

_worker_ctx: SearchContext | None = None


def _init_worker(B, X, sieve, force):
    global _worker_ctx
    _worker_ctx = SearchContext.create(B, X, sieve, force)


def _run_task(task):
    ctx = _worker_ctx
    ctx.counters = Counters()
    kind, bound, pre = task
    if kind == "hybrid":
        ctx.counters.jobs += 1
        records = hybrid(pre, bound, ctx.X, ctx)
    else:
        ctx.counters.jobs += 1
        records = lambda_sieve(pre, bound, ctx.sieve, ctx.counters)
    return records, ctx.counters


def _execute(tasks, B, X, sieve, force, workers) -> tuple[list[CarmichaelRecord], Counters]:
    counters = Counters()
    results: list[CarmichaelRecord] = []
    if workers <= 1:
        _init_worker(B, X, sieve, force)
        outputs: Iterable = map(_run_task, tasks)
        for records, c in outputs:
            results += records
            counters += c
        return results, counters
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(B, X, sieve, force)) as pool:
        for records, c in pool.map(_run_task, tasks, chunksize=chunk):
            results += records
            counters += c
    return results, counters


def run(
    B: int,
    X: int | None = None,
    strategy: str = "hybrid",
    workers: int = 1,
    delta: float = 0.2,
    base_floor: int = 10**4,
    sieve: SieveConfig | None = None,
    force: str | None = None,
    jobs: Iterable[Preproduct] | None = None,
    small_case: bool = True,
) -> TabulationResult:
    """Tabulate all Carmichael numbers below ``B``.

    The merged record list is sorted and duplicate-free, and does not depend
    on ``workers`` or on scheduling order.  ``jobs`` replaces the generated
    job set of the recursive strategies (a shard, say) and ``small_case``
    toggles the three-prime pass; together they let shard runs be merged.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if B < 2:
        raise ValueError("bound must be at least 2")
    sieve = sieve or SieveConfig()
    if strategy == "bruteforce":
        return brute_force_oracle(B)
    X = default_crossover(B) if X is None else X
    if not 2 <= X <= B:
        raise ValueError("crossover must satisfy 2 <= X <= B")

    if strategy == "optimal":
        primes = sieve_primes(max(isqrt(B), 2))
        floor_B, plan = _optimal_plan(B, delta, base_floor, primes)
        tasks = [("sieve", bound, pre) for bound, pre in plan]
        results, counters = _execute(tasks, B, X, sieve, None, workers)
        results += brute_force_oracle(floor_B).records
        return TabulationResult(B, None, strategy, merge(results), counters, delta)

    if strategy == "pinch-levels":
        force = "recurse"
    counters = Counters()
    small = tabulate_small_case(B, X, counters) if small_case else []
    jobs = generate_jobs(B, X) if jobs is None else jobs
    tasks = [("hybrid", B, pre) for pre in jobs]
    results, c = _execute(tasks, B, X, sieve, force, workers)
    counters += c
    return TabulationResult(B, X, strategy, merge(small, results), counters)
