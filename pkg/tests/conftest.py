from math import isqrt

import pytest


def trial_factor(n):
    """Plain trial division, independent of the library."""
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def naive_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def naive_carmichael(n):
    """Korselt by trial division."""
    f = trial_factor(n)
    return len(f) >= 2 and len(set(f)) == len(f) and all((n - 1) % (p - 1) == 0 for p in f)


@pytest.fixture(scope="session")
def carmichael_1e6():
    from carmtab.tabulate import brute_force_oracle

    return brute_force_oracle(10**6).numbers


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
