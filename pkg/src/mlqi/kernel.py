"""Gaussian basis function, its Fourier transform and Jacobi theta evaluators.

The stationary quasi-interpolant uses the normalised Gaussian

.. math:: \\psi(x) = (2\\pi)^{-1/2} e^{-x^2/2},
          \\qquad \\widehat\\psi(t) = e^{-2\\pi^2 t^2}.

Summing the transform over a shifted integer lattice gives the periodised
weight :math:`E(t) = \\sum_\\ell \\widehat\\psi(\\ell + t)`, which by Poisson
summation equals :math:`(2\\pi)^{-1/2}\\theta_3(\\pi t, e^{-1/2})`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BoundConstants",
    "bound_constants",
    "periodized_sum_E",
    "periodized_sum_E_theta",
    "psi",
    "psi_hat",
    "theta3_product",
    "theta3_series",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_TWO_PI_SQ = 2.0 * math.pi * math.pi

# beyond this many lost bits the q-series is swapped for its Poisson dual
_MAX_SERIES_CONDITION = 16.0


def psi(x):
    """Gaussian basis function ``exp(-x**2/2) / sqrt(2*pi)``.

    Accepts scalars or arrays; evenness holds bit-for-bit.
    """
    x = np.asarray(x, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
    return float(out) if out.ndim == 0 else out


def psi_hat(t):
    """Fourier transform of :func:`psi`, ``exp(-2*pi**2*t**2)``.

    Underflows silently to 0 for ``|t| > ~6.1``; zero is a valid weight
    everywhere downstream.
    """
    t = np.asarray(t, dtype=float)
    out = np.exp(-_TWO_PI_SQ * t * t)
    return float(out) if out.ndim == 0 else out


def _check_nome(q: float) -> float:
    q = float(q)
    if not abs(q) < 1.0:
        raise ValueError(f"theta nome must satisfy |q| < 1, got q={q!r}")
    return q


def _raw_q_series(z: float, q: float, tol: float) -> tuple[float, float]:
    """Sum ``1 + 2 sum q^(l^2) cos(2 l z)`` for ``0 < q < 1``.

    Returns the value and the sum of absolute terms (the condition scale).
    The loop stops once the geometric tail bound
    ``2 q^(l^2) / (1 - q^(2l+1))`` of the remaining terms drops below `tol`.
    """
    log_q = math.log(q)
    total = 0.0
    scale = 0.0
    ell = 1
    while True:
        term = math.exp(log_q * ell * ell)
        tail = 2.0 * term / -math.expm1(log_q * (2 * ell + 1))
        if tail < tol:
            break
        c = math.cos(2.0 * ell * z)
        total += term * c
        scale += term * abs(c)
        ell += 1
    return 1.0 + 2.0 * total, 1.0 + 2.0 * scale


def _dual_series(z: float, q: float, tol: float) -> float:
    """Positive-term Poisson dual of the q-series.

    With ``q = exp(-lam)``,
    ``theta3(z, q) = sqrt(pi/lam) * sum_k exp(-(z - pi k)**2 / lam)``.
    """
    lam = -math.log(q)
    zr = z - math.pi * math.floor(z / math.pi)  # theta3 is pi-periodic in z
    total = 0.0
    # terms are summed outward from the centre until both flanks are below tol
    k0 = 0 if zr < 0.5 * math.pi else 1
    total += math.exp(-((zr - math.pi * k0) ** 2) / lam)
    for direction in (1, -1):
        k = k0 + direction
        while True:
            d = zr - math.pi * k
            term = math.exp(-d * d / lam)
            total += term
            # successive gaps grow, so the rest is bounded by a geometric series
            ratio = math.exp(-(2.0 * abs(d) + math.pi) * math.pi / lam)
            if term / (1.0 - ratio) < tol:
                break
            k += direction
    return math.sqrt(math.pi / lam) * total


def theta3_series(z: float, q: float, tol: float = 1e-30) -> float:
    """Jacobi theta function ``theta3(z, q)`` from its Fourier series.

    Parameters
    ----------
    z : float
        Real argument.
    q : float
        Real nome, ``|q| < 1``.
    tol : float
        Absolute tail tolerance for truncating the series.

    Notes
    -----
    For nomes close to one the alternating q-series cancels heavily near
    ``z = pi/2`` (``theta3(pi/2, 0.9)`` is about 8e-10). When the ratio of
    absolute-term sum to value exceeds 16 the positive-term Poisson dual
    series is used instead; otherwise the plain q-series is returned.
    """
    q = _check_nome(q)
    z = float(z)
    if q == 0.0:
        return 1.0
    if q < 0.0:
        # (-q)^(l^2) = (-1)^l q^(l^2), i.e. a half-period shift
        q, z = -q, z + 0.5 * math.pi
    value, scale = _raw_q_series(z, q, tol)
    if scale > _MAX_SERIES_CONDITION * abs(value):
        return _dual_series(z, q, tol)
    return value


def theta3_product(z: float, q: float, tol: float = 1e-30) -> float:
    """Jacobi theta function ``theta3(z, q)`` from the triple-product formula.

    Each factor ``1 + 2 q^k cos(2z) + q^(2k)`` (``k = 2l - 1``) is evaluated
    as ``(1 - q^k)**2 + 4 q^k cos(z)**2`` so that no cancellation occurs.
    """
    q = _check_nome(q)
    z = float(z)
    if q == 0.0:
        return 1.0
    if q < 0.0:
        q, z = -q, z + 0.5 * math.pi
    log_q = math.log(q)
    cz2 = math.cos(z) ** 2
    prod = 1.0
    ell = 1
    while True:
        odd = math.exp(log_q * (2 * ell - 1))
        one_minus_odd = -math.expm1(log_q * (2 * ell - 1))
        one_minus_even = -math.expm1(log_q * (2 * ell))
        prod *= (one_minus_odd * one_minus_odd + 4.0 * odd * cz2) * one_minus_even
        # every remaining factor is within 3 q^(2l+1) of one
        if 3.0 * math.exp(log_q * (2 * ell + 1)) < tol:
            break
        ell += 1
    return prod


def periodized_sum_E(t: float) -> float:
    """``E(t) = sum_l psi_hat(l + t)`` by direct lattice summation.

    The sum is taken over ``|l + t| <= 7``; beyond that every term is below
    the smallest double.
    """
    t = float(t)
    tr = t - math.floor(t)
    ells = np.arange(-8, 9, dtype=float)
    terms = psi_hat(ells + tr)
    # add smallest first
    order = np.argsort(terms)
    return float(math.fsum(terms[order]))


def periodized_sum_E_theta(t: float) -> float:
    """``E(t)`` through ``theta3(pi t, exp(-1/2)) / sqrt(2 pi)``.

    Always uses the plain q-series (condition number at most ~70 for this
    nome) so that it stays independent of the lattice sum in
    :func:`periodized_sum_E`.
    """
    t = float(t)
    tr = t - math.floor(t)
    value, _ = _raw_q_series(math.pi * tr, math.exp(-0.5), 1e-30)
    return _INV_SQRT_2PI * value


@dataclass(frozen=True)
class BoundConstants:
    """Constants entering the operator-norm and truncation-rate bounds."""

    a: float
    A: float
    epsilon: float
    mu_a: float
    mu_b: float
    mu_c: float
    b: float

    # relaxed constants used in the three-term recursion
    MU_A_RELAXED = 0.0072
    B_RELAXED = 0.711
    RATE = 0.9

    def recursion_closes(self) -> bool:
        """True when ``psi_hat(1) r^2 + 0.0072 r + 0.711 <= r^3`` at r = 0.9."""
        r = self.RATE
        lhs = psi_hat(1.0) * r * r + self.MU_A_RELAXED * r + self.B_RELAXED
        return lhs <= r**3


def bound_constants() -> BoundConstants:
    """Evaluate all bound constants from :func:`psi_hat` at call time."""
    p1 = psi_hat(1.0)
    p_half = psi_hat(0.5)
    p_quarter = psi_hat(0.25)
    a = 1.0 + 3.0 * p1
    mu_a = p_half + p1
    mu_b = mu_a + p_quarter * (psi_hat(math.sqrt(2.0)) + p1)
    mu_c = (1.0 - p_quarter) * (1.0 + p1 - p_half) + psi_hat(1.5) * (1.0 + p1)
    return BoundConstants(
        a=a,
        A=1.0 + a,
        epsilon=2.0 * psi_hat(2.0),
        mu_a=mu_a,
        mu_b=mu_b,
        mu_c=mu_c,
        b=mu_b + mu_c,
    )
