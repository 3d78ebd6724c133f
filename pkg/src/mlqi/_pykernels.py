"""Pure numpy implementations of the hot loops.

Used when the compiled ``_ckernels`` extension is unavailable. Both
implementations visit contributions in the same order (input frequency
major, lattice shift minor) so scatter results agree to the last bit up to
differences in the platform ``exp``.
"""

import math

import numpy as np

_TWO_PI_SQ = 2.0 * math.pi * math.pi
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

name = "python"


def spectral_scatter(freqs, coeffs, n, t_max, eta, out):
    """Accumulate ``coeffs[i] * psi_hat(k + freqs[i]/n)`` at index ``|freqs[i] + n k|``.

    Only shifts with ``|k + m/n| <= t_max`` and weight above `eta` are
    visited. Contributions whose index falls outside `out` are not stored;
    the sum of their absolute values is returned.
    """
    freqs = np.asarray(freqs, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=float)
    if freqs.size == 0:
        return 0.0
    size = out.shape[0]
    kmin = np.ceil(-freqs / n - t_max).astype(np.int64)
    width = int(math.floor(2.0 * t_max)) + 2
    k = kmin[:, None] + np.arange(width, dtype=np.int64)[None, :]
    shifted = freqs[:, None] + n * k
    t = shifted / n
    w = np.exp(-_TWO_PI_SQ * t * t)
    keep = (np.abs(t) <= t_max) & (w > eta)
    idx = np.abs(shifted)[keep]
    vals = (coeffs[:, None] * w)[keep]
    inside = idx < size
    out += np.bincount(idx[inside], weights=vals[inside], minlength=size)
    return float(np.abs(vals[~inside]).sum())


def window_sum(values, u, radius):
    """Evaluate ``sum_l values[l mod n] * psi(u - l)`` over ``|u - l| <= radius``."""
    values = np.asarray(values, dtype=float)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    n = values.shape[0]
    lo = np.ceil(u - radius).astype(np.int64)
    width = int(math.floor(2.0 * radius)) + 2
    ell = lo[:, None] + np.arange(width, dtype=np.int64)[None, :]
    d = u[:, None] - ell
    w = np.where(np.abs(d) <= radius, _INV_SQRT_2PI * np.exp(-0.5 * d * d), 0.0)
    return (values[np.mod(ell, n)] * w).sum(axis=1)
