"""Three-prime completions ``n = P*q*r`` through the (C, D) parameterization.

For a Carmichael ``Pqr`` there are integers ``2 <= D < P < C`` with
``Delta = C*D - P**2``, ``q = (P-1)(P+D)/Delta + 1``,
``r = (P-1)(P+C)/Delta + 1`` and ``P**2 < C*D < P**2 (p+3)/(p+1)``, where
``p`` is the largest prime of ``P``.  For each ``D`` we either walk the
divisors ``Delta`` of ``(P-1)(P+D)`` or the admissible ``C`` interval.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import Factorization, korselt_check
from .counters import Counters
from .preproduct import Preproduct, cyclic_preproducts, is_admissible
from .primes import FactoredInterval, divisor_count, divisors, factor_interval, is_prime
from .records import CarmichaelRecord, merge


@dataclass(frozen=True)
class CDCandidate:
    D: int
    C: int
    Delta: int
    q: int
    r: int


def _combine(a: Factorization, b: Factorization) -> Factorization:
    exps = dict(a.factors)
    for p, e in b.factors:
        exps[p] = exps.get(p, 0) + e
    return Factorization(a.value * b.value, tuple(sorted(exps.items())))


def candidates_for_D(pre: Preproduct, D: int, N: Factorization, path: str):
    """CD candidates for one ``D``; ``N`` is the factorization of ``(P-1)(P+D)``.

    ``path`` is ``"divisors"`` or ``"C"``.  Yields integral candidates only.
    """
    P, p = pre.P, pre.p
    P2 = P * P
    # C*D < P^2 (p+3)/(p+1)  <=>  Delta*(p+1) < 2 P^2
    if path == "C":
        c_lo = P2 // D + 1
        c_hi = (P2 * (p + 3) - 1) // (D * (p + 1))
        pairs = ((C, C * D - P2) for C in range(c_lo, c_hi + 1))
    elif path == "divisors":
        pairs = (
            ((P2 + delta) // D, delta)
            for delta in divisors(N)
            if delta * (p + 1) < 2 * P2 and (P2 + delta) % D == 0
        )
    else:
        raise ValueError(f"unknown path {path!r}")
    for C, delta in pairs:
        if N.value % delta:
            continue
        num_r = (P - 1) * (P + C)
        if num_r % delta:
            continue
        yield CDCandidate(D, C, delta, N.value // delta + 1, num_r // delta + 1)


def tabulate_pqr(
    pre: Preproduct,
    B: int,
    factors: FactoredInterval | None = None,
    path: str = "auto",
    counters: Counters | None = None,
) -> list[CarmichaelRecord]:
    """All Carmichael ``P*q*r < B`` with primes ``p < q < r``.

    ``factors`` must cover ``[P-1, 2P-1]`` when given; otherwise a window is
    sieved for this ``P`` alone.
    """
    if counters is not None:
        counters.cd_calls += 1
    P, p = pre.P, pre.p
    if P < 3:
        return []
    if factors is None or factors.lo > P - 1 or factors.hi < 2 * P - 1:
        factors = factor_interval(P - 1, 2 * P - 1)
    f_pm1 = factors[P - 1]
    P2 = P * P
    out = []
    for D in range(2, P):
        # q - 1 > (P-1)(P+D)(p+1) / (2 P^2), increasing in D; P*q*q < B is needed
        q_floor = (P - 1) * (P + D) * (p + 1) // (2 * P2) + 1
        if P * q_floor * q_floor >= B:
            break
        N = _combine(f_pm1, factors[P + D])
        choice = path
        if path == "auto":
            c_count = (P2 * (p + 3) - 1) // (D * (p + 1)) - P2 // D
            choice = "C" if c_count <= divisor_count(N) else "divisors"
        for cand in candidates_for_D(pre, D, N, choice):
            q, r = cand.q, cand.r
            if q <= p or P * q * r >= B:
                continue
            if not (is_prime(q) and is_prime(r)):
                continue
            if not is_admissible(q, pre) or (r - 1) % q == 0 or not is_admissible(r, pre):
                continue
            n = P * q * r
            primes = pre.primes + (q, r)
            if korselt_check(n, primes):
                out.append(CarmichaelRecord(n, primes))
    return merge(out)


def tabulate_small_case(B: int, X: int, counters: Counters | None = None) -> list[CarmichaelRecord]:
    """All Carmichael ``n = P*q*r < B`` with cyclic ``P < X`` and ``q > p``."""
    pres = cyclic_preproducts(X)
    if not pres:
        return []
    factors = factor_interval(1, 2 * max(pre.P for pre in pres))
    return merge(*(tabulate_pqr(pre, B, factors, counters=counters) for pre in pres))
