"""Named target functions for the experiment harness."""

from __future__ import annotations

import math
import re

import numpy as np

from .spectral import CosineSeries, eval_series

__all__ = ["Target", "expcos", "quadrature_series", "resolve_target"]


def quadrature_series(func, nodes: int = 2**14, max_freq: int = 40) -> CosineSeries:
    """Cosine coefficients of an even 1-periodic `func` by the trapezoidal rule.

    Uses `nodes` uniform samples; the rule is spectrally accurate for
    analytic integrands.
    """
    x = np.arange(nodes) / nodes
    spectrum = np.fft.rfft(np.asarray(func(x), dtype=float)) / nodes
    c = 2.0 * spectrum.real[: max_freq + 1]
    c[0] *= 0.5
    return CosineSeries(c)


def _expcos(x):
    return np.exp(np.cos(2.0 * math.pi * np.asarray(x, dtype=float)))


class Target:
    """A target known both as a cosine series and as a black-box callable."""

    def __init__(self, name: str, series: CosineSeries, func=None):
        self.name = name
        self.series = series
        self.func = func if func is not None else (lambda x: eval_series(series, x))

    def __repr__(self):
        return f"Target({self.name!r})"


def expcos() -> Target:
    """``exp(cos 2 pi x)``; coefficients ``I_0(1), 2 I_1(1), 2 I_2(1), ...``."""
    return Target("expcos", quadrature_series(_expcos), _expcos)


def resolve_target(name: str) -> Target:
    """Look up ``c<m>`` (pure cosine) or ``expcos``."""
    match = re.fullmatch(r"c(\d+)", name)
    if match:
        return Target(name, CosineSeries.cosine(int(match.group(1))))
    if name == "expcos":
        return expcos()
    raise ValueError(f"unknown target {name!r}; expected c<m> or expcos")
