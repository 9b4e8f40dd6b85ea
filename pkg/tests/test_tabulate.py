import pytest

from carmtab.completion import SieveConfig
from carmtab.preproduct import Preproduct, generate_jobs
from carmtab.primes import BudgetError
from carmtab.tabulate import (
    SearchContext,
    _optimal_plan,
    brute_force_oracle,
    default_crossover,
    hybrid,
    optimal,
    run,
)
from carmtab.primes import sieve_primes
from conftest import naive_carmichael


def test_oracle_small_range():
    assert brute_force_oracle(10**4).numbers == [n for n in range(3, 10**4, 2) if naive_carmichael(n)]
    assert brute_force_oracle(562).numbers == [561]
    assert brute_force_oracle(561).numbers == []
    with pytest.raises(BudgetError):
        brute_force_oracle(10**10)


def test_oracle_known_counts(carmichael_1e6):
    assert len(brute_force_oracle(10**5).records) == 16
    assert len(carmichael_1e6) == 43


def test_default_crossover():
    assert default_crossover(10**6) == 100
    assert default_crossover(10**24) == 10**8
    assert default_crossover(2) == 2
    assert default_crossover(26) == 3


@pytest.mark.parametrize("B", [10**5, 10**6])
def test_hybrid_matches_oracle(B):
    want = brute_force_oracle(B).numbers
    X = default_crossover(B)
    for x in (X, X - 1, X + 1, 7, 13, 35):
        assert run(B, X=x).numbers == want, x


def test_prefix_equal_to_crossover(carmichael_1e6):
    # 41041 = 7*11*13*41: with X = 7 the prefix 7 sits exactly on the crossover
    for X in (3, 5, 7, 11, 13, 35):
        assert run(10**6, X=X).numbers == carmichael_1e6


@pytest.mark.parametrize("delta", [0.15, 0.2, 0.3])
def test_optimal_matches_oracle(delta, carmichael_1e6):
    assert optimal(10**6, delta=delta).numbers == carmichael_1e6
    assert optimal(10**6, delta=delta, base_floor=1000).numbers == carmichael_1e6


def test_optimal_plan_levels():
    primes = sieve_primes(10**4)
    floor_B, tasks = _optimal_plan(10**8, 0.2, 10**4, primes)
    assert floor_B <= 10**4
    assert all(bound <= 10**8 for bound, _ in tasks)
    with pytest.raises(ValueError):
        _optimal_plan(10**8, 0.5, 10**4, primes)


def test_branch_irrelevance(carmichael_1e6):
    B = 10**6
    sieve_all = run(B, force="sieve").numbers
    recurse = run(B, force="recurse").numbers
    assert sieve_all == recurse == carmichael_1e6
    assert run(B, strategy="pinch-levels").numbers == carmichael_1e6


def test_hybrid_node_contract():
    """hybrid(pre) returns only n = P*R with at least three cofactor primes above b, or duplicates."""
    B, X = 10**7, 200
    ctx = SearchContext.create(B, X)
    for pre in generate_jobs(B, X):
        for rec in hybrid(pre, B, X, ctx):
            assert rec.n % pre.P == 0 and rec.n < B
            assert all(q > pre.b for q in rec.primes[len(pre.primes):])


def test_worker_determinism():
    B = 10**6
    base = run(B)
    for workers in (1, 4, 8):
        r = run(B, workers=workers)
        assert [rec.line() for rec in r.records] == [rec.line() for rec in base.records]
        assert r.counters == base.counters
    assert optimal(B, workers=4).numbers == base.numbers


def test_shard_union():
    B, X = 10**6, 100
    jobs = generate_jobs(B, X)
    parts = [run(B, X, jobs=jobs.shard(i, 3), small_case=i == 0).records for i in range(3)]
    merged = sorted({r.n for part in parts for r in part})
    assert merged == run(B, X).numbers


def test_sieve_caps_irrelevant(carmichael_1e6):
    for cfg in (SieveConfig(adaptive=False), SieveConfig(square_cap=3, product_cap=3, prime_floor=3)):
        assert run(10**6, sieve=cfg).numbers == carmichael_1e6


def test_summary_and_validation():
    r = run(10**5)
    s = r.summary()
    assert s["bound"] == 10**5 and s["crossover"] == default_crossover(10**5)
    assert s["jobs"] == len(generate_jobs(10**5, default_crossover(10**5)))
    with pytest.raises(ValueError):
        run(10**5, strategy="nope")
    with pytest.raises(ValueError):
        run(10**5, X=1)
    with pytest.raises(ValueError):
        run(1)
    assert run(10**5, strategy="bruteforce").numbers == r.numbers


@pytest.mark.slow
def test_hybrid_1e8():
    B = 10**8
    assert run(B).numbers == brute_force_oracle(B).numbers == optimal(B).numbers


def test_sieve_branch_is_exclusive():
    B, X = 10**6, 100
    pre = Preproduct.from_primes([101, 103])  # P * lambda**2 > B
    ctx = SearchContext.create(B, X)
    hybrid(pre, B, X, ctx)
    assert ctx.counters.lambda_sieves == 1 and ctx.counters.spc_calls == 0


def test_optimal_parallel_1e7():
    assert optimal(10**7, delta=0.2, workers=4).numbers == brute_force_oracle(10**7).numbers


def test_optimal_below_floor_is_oracle():
    r = optimal(5000, base_floor=10**4)
    assert r.numbers == brute_force_oracle(5000).numbers and r.counters.lambda_sieves == 0
