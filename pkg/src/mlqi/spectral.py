"""Cosine-series representation of even 1-periodic functions.

A function ``f = sum_m f_m cos(2 pi m x)`` is stored as the dense vector of
its cosine coefficients. The quasi-interpolation operator on spacing
``1/n`` acts on a single cosine by

    Q c_m = sum_k psi_hat(k + m/n) c_{|m + n k|},

which :func:`qi_spectral` applies exactly (up to a weight cutoff), while
:func:`qi_eval_direct` evaluates the same operator from grid samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend

__all__ = [
    "CosineSeries",
    "DEFAULT_SPEC",
    "EvalSpec",
    "GridSamples",
    "eval_series",
    "offset_grid",
    "offset_grid_values",
    "qi_eval_direct",
    "qi_spectral",
    "sample",
    "sobolev_norm",
    "sup_norm_estimate",
    "wiener_norm",
]

_TWO_PI_SQ = 2.0 * math.pi * math.pi
_SMALLEST_DOUBLE = 5e-324


@dataclass(frozen=True, eq=False)
class CosineSeries:
    """Finite cosine series ``sum_m coeffs[m] * cos(2 pi m x)``.

    Attributes
    ----------
    coeffs : ndarray
        Coefficient of frequency ``m`` at index ``m``; never empty.
    spilled_mass : float
        Absolute coefficient mass dropped because it landed above the
        frequency cap when this series was produced.
    """

    coeffs: np.ndarray
    spilled_mass: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, copy=True).reshape(-1)
        if c.size == 0:
            c = np.zeros(1)
        if not np.all(np.isfinite(c)):
            raise ValueError("cosine coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "spilled_mass", float(self.spilled_mass))

    @classmethod
    def cosine(cls, m: int, amplitude: float = 1.0) -> "CosineSeries":
        """The single mode ``amplitude * c_m``."""
        if m < 0:
            raise ValueError(f"frequency must be nonnegative, got {m}")
        c = np.zeros(m + 1)
        c[m] = amplitude
        return cls(c)

    @classmethod
    def zeros(cls, max_freq: int = 0) -> "CosineSeries":
        return cls(np.zeros(max_freq + 1))

    @classmethod
    def from_pairs(cls, pairs) -> "CosineSeries":
        """Build from ``(frequency, coefficient)`` pairs; repeats accumulate."""
        pairs = list(pairs)
        if not pairs:
            return cls.zeros()
        top = max(int(k) for k, _ in pairs)
        c = np.zeros(top + 1)
        for k, v in pairs:
            k = int(k)
            if k < 0:
                raise ValueError(f"negative frequency {k}")
            c[k] += float(v)
        return cls(c)

    @property
    def M(self) -> int:
        return self.coeffs.shape[0] - 1

    def nonzero(self):
        """Frequencies and coefficients of the nonzero terms."""
        idx = np.flatnonzero(self.coeffs)
        return idx, self.coeffs[idx]

    def trimmed(self) -> "CosineSeries":
        idx = np.flatnonzero(self.coeffs)
        top = int(idx[-1]) + 1 if idx.size else 1
        return CosineSeries(self.coeffs[:top], self.spilled_mass)

    def padded(self, max_freq: int) -> np.ndarray:
        """Coefficient vector zero-extended to length ``max_freq + 1``."""
        if max_freq < self.M:
            raise ValueError("cannot pad to a shorter length")
        out = np.zeros(max_freq + 1)
        out[: self.M + 1] = self.coeffs
        return out

    def __call__(self, x):
        return eval_series(self, x)

    def _combine(self, other, sign):
        if not isinstance(other, CosineSeries):
            return NotImplemented
        top = max(self.M, other.M)
        c = self.padded(top) + sign * other.padded(top)
        return CosineSeries(c, self.spilled_mass + other.spilled_mass)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        if isinstance(scalar, CosineSeries):
            return NotImplemented
        s = float(scalar)
        return CosineSeries(s * self.coeffs, abs(s) * self.spilled_mass)

    __rmul__ = __mul__

    def __neg__(self):
        return CosineSeries(-self.coeffs, self.spilled_mass)

    def __repr__(self):
        idx, vals = self.nonzero()
        head = ", ".join(f"{k}: {v:.6g}" for k, v in zip(idx[:6], vals[:6]))
        more = ", ..." if idx.size > 6 else ""
        return f"CosineSeries(M={self.M}, {{{head}{more}}})"


@dataclass(frozen=True, eq=False)
class GridSamples:
    """Values ``f(j/n)``, ``j = 0..n-1``, on the dyadic grid ``n = 2**ell``."""

    ell: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError(f"grid exponent must be >= 0, got {self.ell}")
        v = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if v.shape[0] != 2**self.ell:
            raise ValueError(f"expected {2**self.ell} samples, got {v.shape[0]}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return 2**self.ell


@dataclass(frozen=True)
class EvalSpec:
    """Truncation and resolution knobs shared by the evaluators.

    Attributes
    ----------
    window_R : float
        Kernel cutoff radius in units of the grid spacing.
    eta : float
        Spectral weights ``psi_hat(t) <= eta`` are skipped.
    max_freq : int
        Highest frequency kept by :func:`qi_spectral`.
    eval_points : int
        Sample count for sup-norm estimates.
    """

    window_R: float = 14.0
    eta: float = 1e-40
    max_freq: int = 2**16
    eval_points: int = 8192

    def __post_init__(self):
        if not self.window_R >= 8:
            raise ValueError(f"window_R must be >= 8, got {self.window_R}")
        if not 0.0 <= self.eta <= 1e-20:
            raise ValueError(f"eta must lie in [0, 1e-20], got {self.eta}")
        if self.max_freq < 1:
            raise ValueError(f"max_freq must be positive, got {self.max_freq}")
        if self.eval_points < 1024:
            raise ValueError(f"eval_points must be >= 1024, got {self.eval_points}")

    @property
    def t_max(self) -> float:
        """Largest ``|t|`` with ``psi_hat(t)`` possibly above `eta`."""
        floor = max(self.eta, _SMALLEST_DOUBLE)
        return math.sqrt(-math.log(floor) / _TWO_PI_SQ)


DEFAULT_SPEC = EvalSpec()

# frequency-block size for direct summation (bounds temporaries to ~32 MB)
_CHUNK = 1 << 22


def eval_series(f: CosineSeries, x):
    """Direct cosine summation of `f` at scalar or array `x`."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    freqs, vals = f.nonzero()
    out = np.zeros(xa.shape[0])
    step = max(1, _CHUNK // max(1, xa.shape[0]))
    for i in range(0, freqs.shape[0], step):
        fr = freqs[i : i + step]
        phase = np.mod(np.outer(xa, fr), 1.0)
        out += np.cos(2.0 * math.pi * phase) @ vals[i : i + step]
    return float(out[0]) if np.ndim(x) == 0 else out


def sample(f: CosineSeries, ell: int) -> GridSamples:
    """Sample `f` at ``j / 2**ell``.

    Frequencies are reduced modulo the grid size in integer arithmetic, so
    aliases ``c_m`` and ``c_{m + 2**ell}`` give identical samples.
    """
    if ell < 0:
        raise ValueError(f"grid exponent must be >= 0, got {ell}")
    n = 2**ell
    freqs, vals = f.nonzero()
    j = np.arange(n, dtype=np.int64)
    folded = np.zeros(n)
    np.add.at(folded, freqs % n, vals)
    r = np.flatnonzero(folded)
    values = np.zeros(n)
    step = max(1, _CHUNK // n)
    for i in range(0, r.shape[0], step):
        rr = r[i : i + step]
        table = np.cos(2.0 * math.pi * (np.outer(j, rr) % n) / n)
        values += table @ folded[rr]
    return GridSamples(ell, values)


def qi_eval_direct(s: GridSamples, x, spec: EvalSpec = DEFAULT_SPEC):
    """Evaluate ``Q_h f(x) = sum_l f(h l) psi(x/h - l)`` from grid samples.

    Samples are extended ``n``-periodically and the kernel is cut at
    ``|x/h - l| <= spec.window_R``; at the default radius the neglected tail
    is below ``1e-42 * max|values|``.
    """
    u = np.atleast_1d(np.asarray(x, dtype=float)) * s.n
    out = _backend.kernels.window_sum(s.values, u, float(spec.window_R))
    return float(out[0]) if np.ndim(x) == 0 else np.asarray(out)


def qi_spectral(f: CosineSeries, ell: int, spec: EvalSpec = DEFAULT_SPEC) -> CosineSeries:
    """Apply the quasi-interpolant on spacing ``2**-ell`` in frequency space.

    Weights ``psi_hat(k + m/n)`` not exceeding ``spec.eta`` are skipped;
    mass landing above ``spec.max_freq`` is dropped and reported in the
    result's ``spilled_mass``.
    """
    if ell < 0:
        raise ValueError(f"grid exponent must be >= 0, got {ell}")
    n = 2**ell
    freqs, vals = f.nonzero()
    if freqs.size == 0:
        return CosineSeries.zeros()
    t_max = spec.t_max
    reach = int(freqs[-1]) + n * (int(math.ceil(t_max)) + 1)
    out = np.zeros(min(reach, spec.max_freq) + 1)
    spilled = _backend.kernels.spectral_scatter(freqs, vals, n, t_max, spec.eta, out)
    return CosineSeries(out, spilled)


def wiener_norm(f: CosineSeries) -> float:
    """Sum of absolute cosine coefficients (dominates the sup norm)."""
    return float(np.abs(f.coeffs).sum())


def offset_grid(points: int) -> np.ndarray:
    """Midpoint-offset nodes ``(j + 1/2) / points``."""
    return (np.arange(points) + 0.5) / points


def offset_grid_values(f: CosineSeries, points: int) -> np.ndarray:
    """Values of `f` on :func:`offset_grid` computed by one inverse FFT.

    On nodes ``(j + 1/2)/N`` a shift of the frequency by ``N`` flips the
    sign of the cosine, so frequencies fold into ``[0, N)`` with sign
    ``(-1)**(m // N)`` before the transform.
    """
    freqs, vals = f.nonzero()
    folded = np.zeros(points)
    sign = np.where((freqs // points) % 2 == 0, 1.0, -1.0)
    np.add.at(folded, freqs % points, sign * vals)
    twiddle = np.exp(1j * math.pi * np.arange(points) / points)
    return (points * np.fft.ifft(folded * twiddle)).real


def sup_norm_estimate(f: CosineSeries, spec: EvalSpec = DEFAULT_SPEC) -> float:
    """Maximum of ``|f|`` over ``spec.eval_points`` midpoint-offset nodes.

    Never exceeds :func:`wiener_norm` beyond roundoff.
    """
    if not np.any(f.coeffs):
        return 0.0
    return float(np.abs(offset_grid_values(f, spec.eval_points)).max())


def sobolev_norm(f: CosineSeries, s: float) -> float:
    """Periodic Sobolev norm in the all-cosine convention.

    ``||f||_s = (f_0**2 + sum_{k>=1} k**(2s) f_k**2)**(1/2)`` with ``f_k`` the
    cosine coefficients, so ``||c_k||_s = k**s``. Against the two-sided
    exponential definition (``c_k = (e_k + e_{-k})/2``) the non-constant part
    is larger by a factor ``sqrt(2)``.
    """
    if s < 0:
        raise ValueError(f"Sobolev order must be >= 0, got {s}")
    c = f.coeffs
    k = np.arange(c.shape[0], dtype=float)
    weighted = np.power(k[1:], s) * c[1:]
    return float(math.sqrt(c[0] * c[0] + float(np.dot(weighted, weighted))))
