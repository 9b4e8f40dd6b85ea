# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: 64-bit Montgomery ladders and the segmented Korselt sieve."""

from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    typedef unsigned __int128 carm_u128;

    static inline uint64_t carm_mont_inv(uint64_t n) {
        /* -n^{-1} mod 2^64 for odd n, Newton iteration */
        uint64_t x = n;
        for (int i = 0; i < 5; i++) x *= 2 - n * x;
        return (uint64_t)0 - x;
    }

    static inline uint64_t carm_redc(carm_u128 t, uint64_t n, uint64_t ninv) {
        uint64_t m = (uint64_t)t * ninv;
        carm_u128 u = (t + (carm_u128)m * n) >> 64;
        /* t < n*2^64 and m*n < n*2^64, so the sum may carry past 128 bits */
        int carry = (t + (carm_u128)m * n) < t;
        if (carry) u += ((carm_u128)1 << 64);
        if (u >= n) u -= n;
        return (uint64_t)u;
    }

    static inline uint64_t carm_mulmod(uint64_t a, uint64_t b, uint64_t n) {
        return (uint64_t)(((carm_u128)a * b) % n);
    }

    static uint64_t carm_powmod(uint64_t a, uint64_t e, uint64_t n) {
        if (n == 1) return 0;
        if ((n & 1) == 0) {
            uint64_t r = 1 % n, b = a % n;
            while (e) {
                if (e & 1) r = carm_mulmod(r, b, n);
                b = carm_mulmod(b, b, n);
                e >>= 1;
            }
            return r;
        }
        uint64_t ninv = carm_mont_inv(n);
        uint64_t r1 = (uint64_t)(((carm_u128)1 << 64) % n);
        uint64_t r2 = carm_mulmod(r1, r1, n);
        uint64_t x = carm_redc((carm_u128)(a % n) * r2, n, ninv);
        uint64_t acc = r1;
        int top = 63 - __builtin_clzll(e | 1);
        for (int i = top; i >= 0; i--) {
            acc = carm_redc((carm_u128)acc * acc, n, ninv);
            if ((e >> i) & 1) acc = carm_redc((carm_u128)acc * x, n, ninv);
        }
        if (e == 0) acc = r1;
        return carm_redc((carm_u128)acc, n, ninv);
    }
    """
    uint64_t carm_powmod(uint64_t a, uint64_t e, uint64_t n) nogil


def powmod64(a, e, m):
    if m < 1 or m >= 2**64 or e < 0 or e >= 2**64:
        raise OverflowError("powmod64 needs 1 <= m < 2**64 and 0 <= e < 2**64")
    return carm_powmod(<uint64_t>(a % m), <uint64_t>e, <uint64_t>m)


def fermat_filter(P, rstar, lam, k_lo, const uint8_t[:] mask, base=2):
    """Offsets ``i`` with ``mask[i]`` set whose ``n`` passes the base Fermat test.

    ``n = P * (rstar + (k_lo + i) * lam)`` must stay below ``2**64``.
    """
    cdef Py_ssize_t size = mask.shape[0]
    if size == 0:
        return []
    if P * (rstar + (k_lo + size - 1) * lam) >= 2**64:
        raise OverflowError("candidate exceeds 64 bits")
    cdef uint64_t n0 = P * (rstar + k_lo * lam)
    cdef uint64_t step = P * lam
    cdef uint64_t b = base
    cdef uint64_t n
    cdef Py_ssize_t i
    out = []
    for i in range(size):
        if mask[i]:
            n = n0 + <uint64_t>i * step
            if (n & 1) and carm_powmod(b, n - 1, n) == 1:
                out.append(i)
    return out


def korselt_segment(lo, hi, primes):
    """Carmichael numbers in ``[lo, hi)``, by Korselt's criterion.

    ``primes`` must hold every prime up to ``isqrt(hi - 1)``.
    """
    if lo < 2:
        lo = 2
    if hi <= lo:
        return []
    if hi >= 2**63:
        raise OverflowError("segment must lie below 2**63")
    cdef int64_t base = lo
    cdef Py_ssize_t size = hi - lo
    cdef uint64_t *rest = <uint64_t *> malloc(size * sizeof(uint64_t))
    cdef uint8_t *ok = <uint8_t *> malloc(size)
    cdef uint8_t *cnt = <uint8_t *> malloc(size)
    if rest == NULL or ok == NULL or cnt == NULL:
        free(rest); free(ok); free(cnt)
        raise MemoryError()
    cdef Py_ssize_t i, s
    cdef uint64_t p, v, n
    cdef uint64_t top = hi
    try:
        for i in range(size):
            rest[i] = base + i
            ok[i] = 1
            cnt[i] = 0
        for q in primes:
            p = q
            if p * p >= top:
                break
            s = (p - base % p) % p
            i = s
            while i < size:
                if ok[i]:
                    n = base + i
                    v = rest[i] / p
                    if v % p == 0 or (n - 1) % (p - 1) != 0:
                        ok[i] = 0
                    else:
                        rest[i] = v
                        cnt[i] += 1
                i += p
        out = []
        for i in range(size):
            if ok[i]:
                n = base + i
                v = rest[i]
                if v > 1:
                    if (n - 1) % (v - 1) != 0:
                        continue
                    cnt[i] += 1
                if cnt[i] >= 2:
                    out.append(n)
        return out
    finally:
        free(rest); free(ok); free(cnt)
