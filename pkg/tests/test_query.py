import random

import pytest
from hypothesis import given, settings, strategies as st

from carmtab.arith import korselt_check
from carmtab.completion import kmax_for
from carmtab.counters import Counters
from carmtab.preproduct import Preproduct, generate_jobs, r_star
from carmtab.primes import is_prime, next_prime, pollard_factor
from carmtab.query import (
    Carmichael,
    NotCarmichael,
    PartialSplit,
    QueryConfig,
    Reason,
    Undecided,
    is_carmichael,
    refine_split,
)
from conftest import naive_carmichael


def truth(n):
    f = pollard_factor(n)
    return f.squarefree and korselt_check(n, f.primes)


def test_examples():
    v = is_carmichael(561, Preproduct.from_primes([3]), 2)
    assert isinstance(v, Carmichael) and v.factorization.primes == (3, 11, 17)

    v = is_carmichael(15, Preproduct.from_primes([3]))
    assert v == NotCarmichael(Reason.FERMAT_WITNESS, 2)

    v = is_carmichael(41041, Preproduct.from_primes([7, 13]), 13)
    assert v == NotCarmichael(Reason.FACTOR_TOO_SMALL, 11)

    v = is_carmichael(63973, Preproduct.from_primes([7, 13]), 13)
    assert v.factorization.primes == (7, 13, 19, 37)


def test_edge_cases():
    assert is_carmichael(7, Preproduct.one()).reason is Reason.PRIME
    assert is_carmichael(2, Preproduct.one()).reason is Reason.PRIME
    assert is_carmichael(10, Preproduct.one()).reason is Reason.FERMAT_WITNESS
    assert is_carmichael(561, Preproduct.from_primes([3, 11, 17])).is_carmichael
    assert is_carmichael(33, Preproduct.from_primes([3, 11])).reason is Reason.KORSELT_DIVISIBILITY
    with pytest.raises(ValueError):
        is_carmichael(10, Preproduct.from_primes([3]))


def test_rejection_reasons():
    # 3 * 5 * 5 * ... : square of a cofactor prime
    v = is_carmichael(3 * 11 * 11 * 17, Preproduct.from_primes([3]))
    assert isinstance(v, NotCarmichael)
    # P's prime repeated in R
    v = is_carmichael(3 * 3 * 11 * 17, Preproduct.from_primes([3]))
    assert v.reason in (Reason.NOT_SQUAREFREE, Reason.FERMAT_WITNESS)


def test_refine_split_examples():
    s = refine_split(PartialSplit(15, [15]), 4)
    assert sorted(s.confirmed) == [3, 5] and not s.pending
    s = PartialSplit(561, [187], [3])
    # 67 is a nontrivial root of 1 mod 561; 67 - 1 = 66 shares 11 with 187
    out = refine_split(s, 67)
    assert sorted(out.confirmed) == [3, 11, 17]
    with pytest.raises(ValueError):
        refine_split(s, 1)


def test_refine_split_noop():
    # x = 1 + 561 * t is never nontrivial, so use a root whose gcd misses the cofactor
    s = PartialSplit(561, [11], [3, 17])
    out = refine_split(s, 67)
    assert out.pending == [] and sorted(out.confirmed) == [3, 11, 17]
    s = PartialSplit(561, [], [3, 11, 17])
    assert refine_split(s, 67).confirmed == [3, 11, 17]


def test_refine_split_fuzz(carmichael_1e6):
    rng = random.Random(3)
    for n in rng.sample(carmichael_1e6, 30):
        d, s = n - 1, 0
        while d % 2 == 0:
            d //= 2
            s += 1
        for a in range(2, 60):
            x = pow(a, d, n)
            if x in (1, n - 1):
                continue
            for _ in range(s):
                y = x * x % n
                if y == 1:
                    out = refine_split(PartialSplit(n, [n]), x)
                    assert out.product() == n
                    break
                if y == n - 1:
                    break
                x = y


def test_fermat_reject_costs_no_factoring():
    c = Counters()
    v = is_carmichael(3 * 1000003, Preproduct.from_primes([3]), stats=c)
    assert v.reason is Reason.FERMAT_WITNESS
    assert c.factor_ops == 0 and c.ladders == 1


def test_matches_oracle_on_job_progressions():
    """Every n = P*(r* + k*lambda) < 10^5 over the jobs for X = 10."""
    B = 10**5
    for pre in generate_jobs(B, 10):
        rs, lam = r_star(pre), pre.lam
        for k in range(kmax_for(pre, B) + 1):
            n = pre.P * (rs + k * lam)
            if n < 2:
                continue
            v = is_carmichael(n, pre)
            assert v.is_carmichael == naive_carmichael(n) and (n > 2 or not v.is_carmichael), n
            if v.is_carmichael:
                assert korselt_check(n, v.factorization.primes)


def test_floor_bound_semantics(carmichael_1e6):
    pre = Preproduct.from_primes([7])
    for n in carmichael_1e6:
        if n % 7:
            continue
        v = is_carmichael(n, pre, 7)
        others = [p for p in pollard_factor(n).primes if p != 7]
        assert v.is_carmichael == (min(others) > 7), n


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_base_independence(seed, carmichael_1e6):
    cfg = QueryConfig(random_bases=True, seed=seed)
    rng = random.Random(seed)
    sample = rng.sample(carmichael_1e6, 20) + [rng.randrange(3, 10**6, 2) * 3 for _ in range(300)]
    pre = Preproduct.one()
    for n in sample:
        assert is_carmichael(n, pre, config=cfg).is_carmichael == is_carmichael(n, pre).is_carmichael


def test_budget_and_fallback():
    # a strong pseudoprime split needs more than one base here
    n = 3 * 11 * 17 * 23 * 89 * 353  # not necessarily Carmichael, verdict must match truth
    pre = Preproduct.one()
    assert is_carmichael(n, pre, base_budget=1).is_carmichael == truth(n)
    # chernick number: base budget exhaustion ends in rho, never undecided
    k = 1
    while True:
        a, b, c = 6 * k + 1, 12 * k + 1, 18 * k + 1
        if is_prime(a) and is_prime(b) and is_prime(c):
            break
        k += 1
    n = a * b * c
    assert is_carmichael(n, pre, base_budget=1).is_carmichael
    v = is_carmichael(n, pre, config=QueryConfig(base_budget=1, fallback=False))
    assert isinstance(v, (Undecided, Carmichael))


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 10**4), st.integers(2, 10**8))
def test_planted_divisor_fuzz(p0, R):
    p = next_prime(p0) if p0 > 2 else 3
    n = p * R
    v = is_carmichael(n, Preproduct.from_primes([p]))
    assert v.is_carmichael == truth(n)
    if v.is_carmichael:
        assert v.factorization.value == n
