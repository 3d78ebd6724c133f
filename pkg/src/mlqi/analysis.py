"""Executable error analysis for single cosines ``c_m`` with ``m < 2**(ell-1)``.

After ``p`` levels starting at spacing ``h = 2**-ell`` the multilevel error
of ``c_m`` is a central truncation plus a remainder of size at most
``p A**(p-1) eps``::

    T_p c_m = sum_{j < 2**p} abar[j] c_{m - (2**p - j)/h} + alpha[j] c_{m + j/h}

The coefficient vectors double in length each level. This module computes
them by their recursion, cross-checks them against the frequency-space
engine, scans the per-block coefficient inequalities, and evaluates the
closed-form error bound for Sobolev targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernel import BoundConstants, bound_constants, psi_hat
from .multilevel import RunConfig, multilevel_error, multilevel_spectral
from .spectral import DEFAULT_SPEC, CosineSeries, EvalSpec, qi_spectral

__all__ = [
    "BoundScanReport",
    "LEMMA_IDS",
    "TruncationState",
    "c_of_t",
    "d_of_s",
    "highfreq_identity_check",
    "init_truncation",
    "mp_sequence",
    "scan_lemma_bounds",
    "step_truncation",
    "theorem_bound",
    "theorem_bound_terms",
    "truncation_discrepancies",
    "truncation_history",
    "truncation_norm",
    "verify_truncation",
]

MAX_TRUNCATION_LEVEL = 8
LEMMA_IDS = ("L3", "L4", "L5", "L6", "T1-recursion")
# relative allowance for roundoff when comparing two sides of an inequality
_ROUNDOFF = 1e-14


@dataclass(frozen=True, eq=False)
class TruncationState:
    """Level-``p`` truncation coefficients for ``c_m`` at first spacing ``2**-ell``."""

    p: int
    m: int
    ell: int
    alpha_bar: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    remainder_budget: float = 0.0

    def __post_init__(self):
        size = 2**self.p
        for name in ("alpha_bar", "alpha"):
            v = np.array(getattr(self, name), dtype=float, copy=True)
            if v.shape != (size,):
                raise ValueError(f"{name} must have length 2**p = {size}")
            v.flags.writeable = False
            object.__setattr__(self, name, v)

    @property
    def hm(self) -> float:
        return self.m / 2**self.ell

    def frequencies(self) -> tuple[np.ndarray, np.ndarray]:
        """Folded cosine frequencies carrying `alpha_bar` and `alpha`."""
        j = np.arange(2**self.p, dtype=np.int64)
        n = 2**self.ell
        return np.abs(self.m - (2**self.p - j) * n), self.m + j * n

    def to_series(self) -> CosineSeries:
        low, high = self.frequencies()
        c = np.zeros(int(max(low.max(), high.max())) + 1)
        np.add.at(c, low, self.alpha_bar)
        np.add.at(c, high, self.alpha)
        return CosineSeries(c)


def _check_low_frequency(m: int, ell: int) -> None:
    if ell < 2:
        raise ValueError(f"requires ell >= 2, got ell={ell}")
    if not 0 <= m < 2 ** (ell - 1):
        raise ValueError(f"requires m < 2^{{ell-1}} (m={m}, ell={ell}, 2^(ell-1)={2 ** (ell - 1)})")


def _level_zero(m: int, ell: int) -> TruncationState:
    # M_0 = I: the truncation is c_m itself
    return TruncationState(0, m, ell, np.zeros(1), np.ones(1), 0.0)


def step_truncation(s: TruncationState, constants: BoundConstants | None = None) -> TruncationState:
    """Advance the truncation coefficients by one level.

    With ``S_j = abar_j + alpha_j`` and ``t_j = (hm + j) / 2**p``::

        abar'[j]        = -S_j psi_hat(t_j - 2)
        abar'[2**p + j] = abar_j - S_j psi_hat(t_j - 1)
        alpha'[j]       = alpha_j - S_j psi_hat(t_j)
        alpha'[2**p + j] = -S_j psi_hat(t_j + 1)
    """
    k = constants or bound_constants()
    size = 2**s.p
    j = np.arange(size)
    t = (s.hm + j) / size
    total = s.alpha_bar + s.alpha
    alpha_bar = np.concatenate([-total * psi_hat(t - 2.0), s.alpha_bar - total * psi_hat(t - 1.0)])
    alpha = np.concatenate([s.alpha - total * psi_hat(t), -total * psi_hat(t + 1.0)])
    p = s.p + 1
    return TruncationState(p, s.m, s.ell, alpha_bar, alpha, p * k.A ** (p - 1) * k.epsilon)


def init_truncation(m: int, ell: int) -> TruncationState:
    """Level-one coefficients ``-psi_hat(hm-2), -psi_hat(hm-1), 1-psi_hat(hm), -psi_hat(hm+1)``."""
    _check_low_frequency(m, ell)
    return step_truncation(_level_zero(m, ell))


def truncation_history(m: int, ell: int, levels: int) -> list[TruncationState]:
    """States for ``p = 0..levels`` (index ``p`` holds level ``p``)."""
    _check_low_frequency(m, ell)
    if not 0 <= levels <= MAX_TRUNCATION_LEVEL:
        raise ValueError(f"levels must lie in [0, {MAX_TRUNCATION_LEVEL}], got {levels}")
    k = bound_constants()
    states = [_level_zero(m, ell)]
    for _ in range(levels):
        states.append(step_truncation(states[-1], k))
    return states


def truncation_norm(s: TruncationState) -> float:
    """``sum_j |alpha_bar_j| + |alpha_j|``."""
    return float(np.abs(s.alpha_bar).sum() + np.abs(s.alpha).sum())


def truncation_discrepancies(
    m: int, ell: int, levels: int, spec: EvalSpec = DEFAULT_SPEC
) -> list[float]:
    """Max coefficient gap between the recursion and the spectral residual, per level."""
    states = truncation_history(m, ell, levels)
    reports = multilevel_spectral(CosineSeries.cosine(m), RunConfig(ell0=ell, levels=levels, spec=spec))
    out = []
    for state, rep in zip(states[1:], reports):
        trunc = state.to_series()
        top = max(trunc.M, rep.residual.M)
        out.append(float(np.abs(trunc.padded(top) - rep.residual.padded(top)).max()))
    return out


def verify_truncation(m: int, ell: int, levels: int, spec: EvalSpec = DEFAULT_SPEC) -> float:
    """Largest discrepancy between recursion and spectral residual over all levels."""
    return max(truncation_discrepancies(m, ell, levels, spec))


@dataclass
class BoundScanReport:
    """Outcome of scanning one family of inequalities.

    Each violation is ``(p, j, lhs, rhs)``; `j` is ``-1`` for the norm
    recursion, which has no coefficient index.
    """

    lemma_id: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _check(self, p, j0, lhs, rhs):
        lhs = np.atleast_1d(lhs)
        rhs = np.atleast_1d(rhs)
        self.checked += lhs.size
        bad = np.flatnonzero(lhs > rhs * (1.0 + _ROUNDOFF))
        for i in bad:
            self.violations.append((p, int(j0 + i) if j0 >= 0 else -1, float(lhs[i]), float(rhs[i])))


def scan_lemma_bounds(m: int, ell: int, levels: int) -> list[BoundScanReport]:
    """Check every coefficient-block inequality for ``p <= levels``.

    Families (``S^(q)_j = |abar^(q)_j| + |alpha^(q)_j|``):

    * L3, ``p >= 2``: ``abar[j]`` and ``alpha[2^(p-1)+j]`` at most
      ``psi_hat(1) S^(p-1)_j``.
    * L4, ``p >= 3``: ``abar[2^(p-1)+j]``, ``alpha[2^(p-2)+j]`` at most
      ``mu_a S^(p-2)_j``.
    * L5, ``p >= 3``: ``abar[2^(p-1)+2^(p-2)+j]``, ``alpha[2^(p-3)+j]`` at most
      ``mu_b S^(p-3)_j``.
    * L6, ``p >= 3``: ``abar[2^p - 2^(p-3) + j]``, ``alpha[j]`` at most
      ``mu_c S^(p-3)_j``.
    * T1, ``p >= 3``: ``||T_p|| <= psi_hat(1)||T_(p-1)|| + 0.0072||T_(p-2)||
      + 0.711||T_(p-3)||``.

    Absolute values are used on both sides throughout.
    """
    k = bound_constants()
    states = truncation_history(m, ell, levels)
    norms = [truncation_norm(s) for s in states]
    s_abs = [np.abs(s.alpha_bar) + np.abs(s.alpha) for s in states]
    reports = {lid: BoundScanReport(lid) for lid in LEMMA_IDS}
    p1 = psi_hat(1.0)
    for p in range(2, levels + 1):
        ab = np.abs(states[p].alpha_bar)
        al = np.abs(states[p].alpha)
        half, quarter, eighth = 2 ** (p - 1), 2 ** (p - 2), 2 ** (p - 3) if p >= 3 else 0
        rep = reports["L3"]
        rhs = p1 * s_abs[p - 1]
        rep._check(p, 0, ab[:half], rhs)
        rep._check(p, 0, al[half:], rhs)
        if p < 3:
            continue
        rhs = k.mu_a * s_abs[p - 2]
        reports["L4"]._check(p, 0, ab[half : half + quarter], rhs)
        reports["L4"]._check(p, 0, al[quarter:half], rhs)
        rhs = k.mu_b * s_abs[p - 3]
        reports["L5"]._check(p, 0, ab[half + quarter : half + quarter + eighth], rhs)
        reports["L5"]._check(p, 0, al[eighth:quarter], rhs)
        rhs = k.mu_c * s_abs[p - 3]
        reports["L6"]._check(p, 0, ab[half + quarter + eighth :], rhs)
        reports["L6"]._check(p, 0, al[:eighth], rhs)
        rhs = (
            p1 * norms[p - 1]
            + BoundConstants.MU_A_RELAXED * norms[p - 2]
            + BoundConstants.B_RELAXED * norms[p - 3]
        )
        reports["T1-recursion"]._check(p, -1, norms[p], rhs)
    return [reports[lid] for lid in LEMMA_IDS]


def mp_sequence(levels: int, variant: str = "table-consistent") -> list[float]:
    """Reference decay sequence ``m_1..m_levels``.

    ``table-consistent``: ``m_p = prod_{j=1..p} (1 - psi_hat(2**-j))``.

    ``as-printed``: ``m_p = (1 - 2 psi_hat(1)) (1 - 2 psi_hat(1/2))
    prod_{j=2..p} (1 - psi_hat(2**-j))``, i.e. the displayed product read
    with one factor per ``j = 0..p``. This is the ``c_1`` coefficient of the
    residual after ``p + 1`` levels started at spacing one.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    out = []
    if variant == "table-consistent":
        prod = 1.0
        for j in range(1, levels + 1):
            prod *= 1.0 - psi_hat(2.0**-j)
            out.append(prod)
    elif variant == "as-printed":
        prod = (1.0 - 2.0 * psi_hat(1.0)) * (1.0 - 2.0 * psi_hat(0.5))
        for j in range(2, levels + 2):
            out.append(prod)
            prod *= 1.0 - psi_hat(2.0**-j)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return out


_C_TERMS = 10**6


def c_of_t(t: float, p: int) -> float:
    """``(sum_{k >= 2**(p-2)} k**(-2t))**(1/2)``.

    A million explicit terms are summed; the remainder is replaced by its
    integral upper bound, so the result is slightly conservative.
    """
    if not t > 0.5:
        raise ValueError(f"requires t > 1/2, got t={t}")
    if p < 2:
        raise ValueError(f"requires p >= 2, got p={p}")
    k0 = 2 ** (p - 2)
    k = np.arange(k0, k0 + _C_TERMS, dtype=float)
    partial = float(np.sum(np.exp(-2.0 * t * np.log(k))[::-1]))
    last = k0 + _C_TERMS - 1
    tail = last ** (1.0 - 2.0 * t) / (2.0 * t - 1.0)
    return math.sqrt(partial + tail)


def d_of_s(s: float, p: int) -> float:
    """``(sum_{l=0}^{p-3} 0.9**(-2l-4) 2**(-2l(s-1/2)))**(1/2)``."""
    if p < 3:
        raise ValueError(f"requires p >= 3, got p={p}")
    ell = np.arange(p - 2, dtype=float)
    terms = 0.9 ** (-2.0 * ell - 4.0) * 2.0 ** (-2.0 * ell * (s - 0.5))
    return math.sqrt(float(terms.sum()))


def theorem_bound_terms(s: float, t: float, p: int, f_norm_s: float = 1.0, big_b: float = 10.0) -> dict:
    """The three components of the sup-norm error bound and their total.

    ``big_b`` stands in for the unspecified constant in the ``0.9**p``
    truncation envelope; 10 is an empirical envelope, not a derived value.
    """
    if not s >= 1:
        raise ValueError(f"requires s >= 1, got s={s}")
    if not 0.5 < t < s:
        raise ValueError(f"requires 1/2 < t < s, got t={t}, s={s}")
    if p < 3:
        raise ValueError(f"requires p >= 3, got p={p}")
    if not big_b > 0:
        raise ValueError(f"requires B > 0, got B={big_b}")
    if not f_norm_s >= 0:
        raise ValueError(f"requires ||f||_s >= 0, got {f_norm_s}")
    k = bound_constants()
    c = c_of_t(t, p)
    d = d_of_s(s, p)
    truncation = 31.0 * big_b * (1.0 + d) * 0.9**p
    tail = c * k.A**p * 2.0 ** (-(p - 2) * (s - t))
    remainder = 2.0 / math.sqrt(3.0) * p**1.5 * k.A**p * k.epsilon
    return {
        "C": c,
        "D": d,
        "truncation": truncation * f_norm_s,
        "tail": tail * f_norm_s,
        "remainder": remainder * f_norm_s,
        "total": (truncation + tail + remainder) * f_norm_s,
    }


def theorem_bound(s: float, t: float, p: int, f_norm_s: float = 1.0, big_b: float = 10.0) -> float:
    """Upper bound on ``||f - M_{1,p} f||_inf`` for ``f`` with Sobolev norm `f_norm_s`."""
    return theorem_bound_terms(s, t, p, f_norm_s, big_b)["total"]


def _high_frequency_rhs(ell: int, n: int, p: int, spec: EvalSpec) -> CosineSeries:
    m = 2**ell + n

    def mq(j, start, levels):
        # M_{2^-start, levels} Q_{2^-j} c_{n mod 2^j}
        g = qi_spectral(CosineSeries.cosine(n % 2**j), j, spec)
        return multilevel_error(g, start, levels, spec)

    if p <= ell + 1:
        rhs = CosineSeries.cosine(m)
        for j in range(p):
            rhs = rhs - mq(j, j + 1, p - 1 - j)
        return rhs
    lag = p - (ell + 2)
    cm = CosineSeries.cosine(m)
    rhs = multilevel_error(cm, ell + 2, lag, spec)
    rhs = rhs - multilevel_error(qi_spectral(cm, ell + 1, spec), ell + 2, lag, spec)
    for j in range(ell + 1):
        rhs = rhs - mq(j, j + 1, p - j - 1)
    return rhs


def highfreq_identity_check(ell: int, n: int, p: int, spec: EvalSpec = DEFAULT_SPEC) -> float:
    """Compare ``M_{1,p} c_m``, ``m = 2**ell + n``, with its decomposition.

    For ``p <= ell + 1`` the right-hand side is
    ``c_m - sum_{j<p} M_{2^-(j+1), p-1-j} Q_{2^-j} c_{n mod 2^j}``; beyond
    that the leading ``c_m`` is replaced by
    ``M_{h/4, p-ell-2}(c_m - Q_{h/2} c_m)`` with ``h = 2**-ell`` and the sum
    runs over ``j <= ell``. Both sides are built in frequency space and the
    largest coefficient difference is returned.
    """
    if ell < 0 or not 0 <= n < 2**ell:
        raise ValueError(f"requires 0 <= n < 2^ell (ell={ell}, n={n})")
    if not 1 <= p <= ell + 4:
        raise ValueError(f"requires 1 <= p <= ell + 4 (p={p}, ell={ell})")
    lhs = multilevel_error(CosineSeries.cosine(2**ell + n), 0, p, spec)
    rhs = _high_frequency_rhs(ell, n, p, spec)
    top = max(lhs.M, rhs.M)
    return float(np.abs(lhs.padded(top) - rhs.padded(top)).max())
