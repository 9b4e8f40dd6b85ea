"""Completing a preproduct: lambda-sieving and single prime completion.

Every Carmichael multiple ``n = P*R`` of a cyclic ``P`` has
``R = r* + k*lambda(P)``.  The lambda-sieve walks all such ``k`` with
``n < B``, clears the ``k`` whose ``R`` has a factor that no admissible
completion can have, and queries the survivors.  Single prime completion
looks for one prime ``r`` with ``r = r* mod lambda(P)`` and ``r - 1 | P - 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd

from . import _accel
from .counters import Counters
from .preproduct import Preproduct, is_admissible, r_star
from .primes import divisor_count, divisors, is_prime, pollard_factor, small_primes
from .query import Carmichael, QueryConfig, is_carmichael
from .records import CarmichaelRecord


class RuleKind(enum.Enum):
    SMALL_PRIME = "small-prime"
    INADMISSIBLE_PRIME = "inadmissible-prime"
    PRIME_SQUARE = "prime-square"
    INADMISSIBLE_PRODUCT = "inadmissible-product"


@dataclass(frozen=True)
class SieveRule:
    modulus: int
    kind: RuleKind


class Marking(enum.Enum):
    NONE = "none"
    ALL = "all"


@dataclass(frozen=True)
class Progression:
    k0: int
    step: int


@dataclass
class SieveConfig:
    prime_floor: int = 1000
    square_cap: int = 10**4
    product_cap: int = 10**4
    segment: int = 1 << 22
    adaptive: bool = True
    query: QueryConfig = field(default_factory=QueryConfig)


def solve_progression(rule: SieveRule | int, r: int, lam: int, kmax: int):
    """Describe ``{0 <= k <= kmax : m | r + k*lam}``.

    Returns ``Marking.NONE``, ``Marking.ALL`` or ``Progression(k0, step)``.
    """
    m = rule.modulus if isinstance(rule, SieveRule) else rule
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if kmax < 0:
        return Marking.NONE
    g = gcd(lam, m)
    if r % g:
        return Marking.NONE
    step = m // g
    if step == 1:
        return Marking.ALL
    k0 = (-(r // g) * pow(lam // g, -1, step)) % step
    if k0 > kmax:
        return Marking.NONE
    return Progression(k0, step)


def sieve_rules(pre: Preproduct, kmax: int, config: SieveConfig | None = None) -> list[SieveRule]:
    """Moduli whose multiples cannot divide the cofactor ``R`` of a completion."""
    config = config or SieveConfig()
    limit = max(pre.b, config.prime_floor)
    square_cap, product_cap = config.square_cap, config.product_cap
    if config.adaptive:
        # rules that clear at most one candidate cost more than the ladder they save
        cap = max(128, kmax + 1)
        limit, square_cap, product_cap = min(limit, cap), min(square_cap, cap), min(product_cap, cap)
    rules = []
    for q in small_primes(limit):
        if q <= pre.b:
            rules.append(SieveRule(q, RuleKind.SMALL_PRIME))
        elif gcd(q - 1, pre.P) > 1:
            rules.append(SieveRule(q, RuleKind.INADMISSIBLE_PRIME))
    for q in small_primes(square_cap):
        if q > pre.b and gcd(q - 1, pre.P) == 1:
            rules.append(SieveRule(q * q, RuleKind.PRIME_SQUARE))
    for q in small_primes(product_cap):
        s = 2 * q + 1
        if q > pre.b and is_prime(s) and gcd(q - 1, pre.P) == 1 and gcd(s - 1, pre.P) == 1:
            rules.append(SieveRule(q * s, RuleKind.INADMISSIBLE_PRODUCT))
    return rules


def kmax_for(pre: Preproduct, B: int) -> int:
    """Largest ``k`` with ``P*(r* + k*lambda) < B``; -1 when there is none."""
    top = (B - 1) // pre.P
    rs = r_star(pre)
    if top < rs:
        return -1
    return (top - rs) // pre.lam


def sieve_mask(pre: Preproduct, k_lo: int, size: int, rules) -> bytearray:
    """Survivor flags for ``k`` in ``[k_lo, k_lo + size)``."""
    mask = bytearray(b"\x01") * size
    r = r_star(pre) + k_lo * pre.lam
    for rule in rules:
        mark = solve_progression(rule, r, pre.lam, size - 1)
        if mark is Marking.NONE:
            continue
        if mark is Marking.ALL:
            return bytearray(size)
        mask[mark.k0 :: mark.step] = bytes(len(range(mark.k0, size, mark.step)))
    return mask


def sieve_survivors(pre: Preproduct, B: int, rules=None, config: SieveConfig | None = None) -> list[int]:
    """All surviving ``k`` (mainly for inspection and tests)."""
    kmax = kmax_for(pre, B)
    if kmax < 0:
        return []
    if rules is None:
        rules = sieve_rules(pre, kmax, config)
    mask = sieve_mask(pre, 0, kmax + 1, rules)
    return [k for k, v in enumerate(mask) if v]


def lambda_sieve(
    pre: Preproduct,
    B: int,
    config: SieveConfig | None = None,
    counters: Counters | None = None,
) -> list[CarmichaelRecord]:
    """All Carmichael ``n = P*R < B`` whose cofactor primes exceed ``pre.b``.

    Also reports ``P`` itself when it is Carmichael.  Results may include
    numbers other search branches find too; callers deduplicate.
    """
    config = config or SieveConfig()
    counters = counters if counters is not None else Counters()
    counters.lambda_sieves += 1
    P, lam = pre.P, pre.lam
    rs = r_star(pre)
    kmax = kmax_for(pre, B)
    if kmax < 0:
        return []
    rules = sieve_rules(pre, kmax, config)
    out = []
    for k_lo in range(0, kmax + 1, config.segment):
        size = min(config.segment, kmax + 1 - k_lo)
        mask = sieve_mask(pre, k_lo, size, rules)
        base_r = rs + k_lo * lam
        if base_r == 1:
            # R = 1: the preproduct itself
            mask[0] = 0
            if P > 1 and P < B and len(pre.primes) >= 3 and (P - 1) % lam == 0:
                out.append(CarmichaelRecord(P, pre.primes))
        alive = mask.count(1)
        counters.sieve_survivors += alive
        passing = _accel.fermat_filter(P, base_r, lam, 0, mask)
        counters.ladders += alive
        counters.fermat_rejects += alive - len(passing)
        for i in passing:
            n = P * (base_r + i * lam)
            v = is_carmichael(n, pre, pre.b, config=config.query, stats=counters)
            if isinstance(v, Carmichael):
                out.append(CarmichaelRecord(n, v.factorization.primes))
    return out


def single_prime_completion(
    pre: Preproduct,
    B: int,
    strategy: str = "auto",
    counters: Counters | None = None,
) -> list[CarmichaelRecord]:
    """All Carmichael ``P*r < B`` with ``r`` a prime above ``pre.b``.

    ``strategy`` is ``"divisors"`` (walk the divisors of ``P - 1``),
    ``"residues"`` (walk ``r = r* + j*lambda``) or ``"auto"`` (fewer steps).
    """
    if counters is not None:
        counters.spc_calls += 1
    P, lam = pre.P, pre.lam
    if len(pre.primes) < 2:
        return []
    rs = r_star(pre)
    top = min((B - 1) // P, P)  # r - 1 | P - 1 forces r <= P
    lo = pre.b
    if top <= lo or top < rs:
        return []
    j0 = max(0, (lo - rs) // lam + 1)
    n_terms = (top - rs) // lam - j0 + 1
    if n_terms <= 0:
        return []
    if strategy == "auto":
        strategy = "residues"
        if n_terms > 32:
            f = pollard_factor(P - 1)
            if counters is not None:
                counters.factor_ops += 1
            if divisor_count(f) < n_terms:
                strategy = "divisors"
    if strategy == "residues":
        candidates = range(rs + j0 * lam, top + 1, lam)
        candidates = [r for r in candidates if (P - 1) % (r - 1) == 0]
    elif strategy == "divisors":
        candidates = [
            d + 1
            for d in divisors(pollard_factor(P - 1))
            if lo < d + 1 <= top and (d + 1 - rs) % lam == 0
        ]
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = []
    for r in candidates:
        if is_prime(r) and is_admissible(r, pre) and (P * r - 1) % lam == 0:
            out.append(CarmichaelRecord(P * r, pre.primes + (r,)))
    return out
