import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from carmtab.primes import (
    DETERMINISTIC_LIMIT,
    BudgetError,
    divisor_count,
    divisors,
    factor_interval,
    is_prime,
    next_prime,
    pollard_factor,
    sieve_primes,
    small_primes,
)
from conftest import naive_is_prime, trial_factor

# strong pseudoprimes to many small prime bases
HARD_COMPOSITES = [
    2047,
    1373653,
    25326001,
    3215031751,
    2152302898747,
    3474749660383,
    341550071728321,
    3825123056546413051,
    318665857834031151167461,
    3317044064679887385961981,
]


def test_sieve_matches_trial_division():
    table = sieve_primes(5000)
    assert list(table) == [n for n in range(5001) if naive_is_prime(n)]
    assert table.between(10, 30) == (11, 13, 17, 19, 23, 29)
    assert table.between(11, 11) == ()
    assert 4999 in table and 4998 not in table


def test_sieve_budget():
    with pytest.raises(BudgetError):
        sieve_primes(10**6, budget=10**5)


def test_small_primes_prefix():
    assert small_primes(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def test_is_prime_small_range():
    for n in range(-5, 20000):
        assert is_prime(n) == naive_is_prime(n), n


def test_is_prime_hard_composites():
    for n in HARD_COMPOSITES:
        assert not is_prime(n), n
    assert DETERMINISTIC_LIMIT == 3317044064679887385961981


def test_is_prime_carmichael_numbers():
    for n in (561, 1105, 1729, 41041, 825265, 321197185, 5394826801, 232250619601):
        assert not is_prime(n)


def test_is_prime_large_known():
    assert is_prime(2**61 - 1)
    assert is_prime(2**89 - 1)
    assert not is_prime(2**67 - 1)
    assert is_prime(10**24 + 7)
    assert not is_prime((2**61 - 1) * (2**31 - 1))


def test_next_prime():
    assert next_prime(1) == 2
    assert next_prime(2) == 3
    assert next_prime(113) == 127
    assert next_prime(10**12) == 10**12 + 39


@given(st.integers(2, 10**9))
def test_pollard_matches_trial(n):
    f = pollard_factor(n)
    assert f.value == n
    assert [p for p, e in f.factors for _ in range(e)] == trial_factor(n)


@settings(max_examples=40, deadline=None)
@given(st.integers(10**5, 10**10), st.integers(10**5, 10**10))
def test_pollard_semiprimes(a, b):
    from carmtab.primes import next_prime as np_

    p, q = np_(a), np_(b)
    f = pollard_factor(p * q)
    assert sorted(f.primes) == sorted({p, q})


def test_pollard_squares_and_powers():
    p = next_prime(10**9)
    assert pollard_factor(p * p).factors == ((p, 2),)
    assert pollard_factor(3**5 * p).factors == ((3, 5), (p, 1))


def test_factor_interval_matches_trial():
    fi = factor_interval(999000, 1001000)
    for n in range(999000, 1001001):
        ps = trial_factor(n)
        assert fi[n].value == n
        assert [p for p, e in fi[n].factors for _ in range(e)] == ps
    with pytest.raises(KeyError):
        fi[1001001]
    with pytest.raises(BudgetError):
        factor_interval(1, 10**6, budget=1000)


def test_divisors():
    f = pollard_factor(720)
    ds = divisors(f)
    assert ds == [d for d in range(1, 721) if 720 % d == 0]
    assert divisor_count(f) == len(ds) == 30
    rng = random.Random(5)
    for _ in range(50):
        n = prod(rng.choice([3, 5, 7, 11]) for _ in range(rng.randrange(1, 8)))
        assert sorted(divisors(pollard_factor(n))) == [d for d in range(1, n + 1) if n % d == 0]


def test_spec_factor_examples():
    assert pollard_factor(4).factors == ((2, 2),)
    assert pollard_factor(8051).primes == (83, 97)
    assert pollard_factor(63973).primes == (7, 13, 19, 37)
    assert not is_prime(757834) and not is_prime(1) and not is_prime(561)
    assert is_prime(757823) == naive_is_prime(757823)


def test_pollard_random_1e12():
    rng = random.Random(12)
    for _ in range(10**4):
        n = rng.randrange(2, 10**12)
        f = pollard_factor(n)
        assert f.value == n and all(is_prime(p) for p in f.primes)


@pytest.mark.slow
def test_is_prime_exhaustive_1e7():
    import numpy as np

    N = 10**7
    flags = np.ones(N + 1, dtype=bool)
    flags[:2] = False
    for d in range(2, 3163):
        if flags[d]:
            flags[d * d :: d] = False
    assert all(is_prime(n) == flags[n] for n in range(N + 1))
