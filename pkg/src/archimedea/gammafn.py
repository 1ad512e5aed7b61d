"""Vectorized principal-branch log Gamma.

Upward recurrence to re(z) >= 12, then Stirling with Bernoulli terms to B_16.
The branch is the principal one (sum of principal logs), matching
scipy.special.loggamma and mpmath.loggamma.
"""
import numpy as np

from .errors import PoleAtPoint

_R0 = 12.0
_HALF_LOG_2PI = 0.5 * np.log(2 * np.pi)
# B_2k / (2k (2k-1))
_STIRLING = np.array([
    1 / 12,
    -1 / 360,
    1 / 1260,
    -1 / 1680,
    1 / 1188,
    -691 / 360360,
    1 / 156,
    -3617 / 122400,
])


def _at_pole(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def log_gamma(z):
    """log Gamma(z) on the principal branch; scalar in, scalar out."""
    arr = np.asarray(z, dtype=complex)
    if np.any(_at_pole(arr)):
        bad = arr[_at_pole(arr)].ravel()[0]
        raise PoleAtPoint(f"Gamma has a pole at {bad.real:g}", point=complex(bad))
    out = _log_gamma(arr)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def _log_gamma(z):
    z = np.array(z, dtype=complex, copy=True)
    shift = np.where(z.real < _R0, np.ceil(_R0 - z.real), 0).astype(np.int64)
    acc = np.zeros_like(z)
    kmax = int(shift.max()) if shift.size else 0
    for k in range(kmax):
        m = shift > k
        acc[m] += np.log(z[m] + k)
    w = z + shift
    inv = 1 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in _STIRLING[::-1]:
        series = series * inv2 + c
    series *= inv
    return (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + series - acc


def gamma(z):
    return np.exp(log_gamma(z))
