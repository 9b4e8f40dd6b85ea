"""Pick the compiled kernels when available, the pure-Python ones otherwise.

Set ``CARMTAB_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
if not os.environ.get("CARMTAB_PURE"):
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

U64 = 1 << 64


def fermat_filter(P, rstar, lam, k_lo, mask, base=2):
    """Fermat-passing offsets; falls back to Python ints past 64 bits."""
    if not mask:
        return []
    n_max = P * (rstar + (k_lo + len(mask) - 1) * lam)
    if _impl is not _pykernels and n_max < U64:
        return _impl.fermat_filter(P, rstar, lam, k_lo, mask, base)
    return _pykernels.fermat_filter(P, rstar, lam, k_lo, mask, base)


def korselt_segment(lo, hi, primes):
    return _impl.korselt_segment(lo, hi, primes)


def powmod64(a, e, m):
    return _impl.powmod64(a, e, m)
