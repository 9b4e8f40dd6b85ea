"""Exact integer arithmetic used throughout the tabulation.

Values are plain Python ints.  The functions here enforce the ranges the
rest of the package relies on: every magnitude below ``2**127`` and every
modulus below ``2**96``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as _gcd
from math import isqrt, prod

WIDE_LIMIT = 1 << 127
MODULUS_LIMIT = 1 << 96


class RangeError(ValueError):
    """A value fell outside the supported integer range."""


def _check_wide(x: int, what: str = "value") -> int:
    if x < 0 or x >= WIDE_LIMIT:
        raise RangeError(f"{what} {x} outside [0, 2**127)")
    return x


def _check_modulus(m: int) -> None:
    if m < 1 or m >= MODULUS_LIMIT:
        raise RangeError(f"modulus {m} outside [1, 2**96)")


def mul_mod(a: int, b: int, m: int) -> int:
    """Return ``a*b mod m`` for ``a, b < m < 2**96``."""
    _check_modulus(m)
    if not (0 <= a < m and 0 <= b < m):
        raise RangeError("operands must be reduced modulo m")
    return a * b % m


def pow_mod(a: int, e: int, m: int) -> int:
    """Return ``a**e mod m`` (square-and-multiply, via the builtin ladder)."""
    _check_modulus(m)
    if e < 0:
        raise RangeError("negative exponent")
    return pow(a, e, m)


def split_exponent(e: int) -> tuple[int, int]:
    """Write ``e = d * 2**s`` with ``d`` odd; returns ``(d, s)``."""
    if e <= 0:
        raise ValueError("exponent must be positive")
    s = (e & -e).bit_length() - 1
    return e >> s, s


def pow_mod_strong(a: int, e: int, m: int) -> list[int]:
    """Strong sequence of ``a**e mod m``.

    With ``e = d * 2**s``, ``d`` odd, returns ``[a**(d*2**i) mod m for i in 0..s]``.
    The last element is ``a**e mod m``; all elements come out of one ladder
    (one exponentiation by ``d`` followed by ``s`` squarings).
    """
    _check_modulus(m)
    d, s = split_exponent(e)
    x = pow(a, d, m)
    seq = [x]
    for _ in range(s):
        x = x * x % m
        seq.append(x)
    return seq


def gcd(a: int, b: int) -> int:
    return _gcd(a, b)


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return _check_wide(a // _gcd(a, b) * b, "lcm")


def integer_nth_root(x: int, n: int) -> int:
    """Floor of the real ``n``-th root of ``x``, certified.

    Uses integer Newton iteration only; the result satisfies
    ``r**n <= x < (r+1)**n``.
    """
    if x < 0:
        raise ValueError("negative radicand")
    if n < 1:
        raise ValueError("root index must be positive")
    if n == 1 or x < 2:
        return x
    if n == 2:
        r = isqrt(x)
    else:
        # start above the root; Newton then decreases monotonically
        r = 1 << -(-x.bit_length() // n)
        while True:
            t = ((n - 1) * r + x // r ** (n - 1)) // n
            if t >= r:
                break
            r = t
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def icbrt(x: int) -> int:
    return integer_nth_root(x, 3)


@dataclass(frozen=True)
class Factorization:
    """An integer together with its prime factorization.

    ``factors`` holds ``(prime, exponent)`` pairs with strictly increasing primes.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"factors do not multiply to {self.value}")
        ps = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ValueError("primes must be strictly increasing")

    @classmethod
    def from_primes(cls, primes) -> Factorization:
        """Build from an iterable of primes, repeated primes counted."""
        counts: dict[int, int] = {}
        for p in primes:
            counts[p] = counts.get(p, 0) + 1
        pairs = tuple(sorted(counts.items()))
        return cls(prod(p**e for p, e in pairs), pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    def check(self) -> None:
        """Verify that every listed prime is prime (raises ValueError)."""
        from .primes import is_prime

        for p, _ in self.factors:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")


def carmichael_lambda(f: Factorization) -> int:
    """Carmichael's function: the exponent of the unit group mod ``f.value``."""
    lam = 1
    for p, e in f.factors:
        if p == 2:
            part = 1 if e == 1 else 2 if e == 2 else 1 << (e - 2)
        else:
            part = p ** (e - 1) * (p - 1)
        lam = lcm(lam, part)
    return lam


def euler_phi(f: Factorization) -> int:
    return prod(p ** (e - 1) * (p - 1) for p, e in f.factors)


def korselt_check(n: int, primes) -> bool:
    """Korselt's criterion for ``n`` given its distinct prime factors.

    True iff the primes multiply to ``n`` exactly (so ``n`` is squarefree),
    there are at least two of them, and ``p - 1`` divides ``n - 1`` for each.
    """
    primes = list(primes)
    if len(primes) < 2 or len(set(primes)) != len(primes):
        return False
    if prod(primes) != n:
        return False
    return all((n - 1) % (p - 1) == 0 for p in primes)
