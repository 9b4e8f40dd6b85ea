"""Pure-Python implementations of the hot kernels.

Same signatures and results as the compiled ``_kernels`` module; used when
the extension is not built or ``CARMTAB_PURE`` is set.
"""

import numpy as np

U64 = 1 << 64


def powmod64(a, e, m):
    return pow(a, e, m)


def fermat_filter(P, rstar, lam, k_lo, mask, base=2):
    """Offsets ``i`` with ``mask[i]`` set whose ``n`` passes the base Fermat test.

    ``n = P * (rstar + (k_lo + i) * lam)``; even ``n`` always fail.
    """
    out = []
    step = P * lam
    n0 = P * (rstar + k_lo * lam)
    i = mask.find(1)
    while i != -1:
        n = n0 + i * step
        if n & 1 and pow(base, n - 1, n) == 1:
            out.append(i)
        i = mask.find(1, i + 1)
    return out


def korselt_segment(lo, hi, primes):
    """Carmichael numbers in ``[lo, hi)``, by Korselt's criterion.

    ``primes`` must hold every prime up to ``isqrt(hi - 1)``.
    """
    lo = max(lo, 2)
    if hi <= lo:
        return []
    n = np.arange(lo, hi, dtype=np.int64)
    rest = n.copy()
    ok = np.ones(hi - lo, dtype=bool)
    count = np.zeros(hi - lo, dtype=np.int8)
    nm1 = n - 1
    for p in primes:
        if p * p >= hi:
            break
        s = -lo % p
        if s >= hi - lo:
            continue
        sl = slice(s, None, p)
        r = rest[sl] // p
        rest[sl] = r
        count[sl] += 1
        ok[sl] &= (r % p != 0) & (nm1[sl] % (p - 1) == 0)
    big = rest > 1
    count[big] += 1
    ok[big] &= nm1[big] % (rest[big] - 1) == 0
    ok &= count >= 2
    return [int(v) for v in n[ok]]
