"""Multilevel Gaussian quasi-interpolation of even 1-periodic functions."""

from . import _backend
from .analysis import (
    BoundScanReport,
    TruncationState,
    c_of_t,
    d_of_s,
    highfreq_identity_check,
    init_truncation,
    mp_sequence,
    scan_lemma_bounds,
    step_truncation,
    theorem_bound,
    theorem_bound_terms,
    truncation_history,
    truncation_norm,
    verify_truncation,
)
from .kernel import (
    BoundConstants,
    bound_constants,
    periodized_sum_E,
    periodized_sum_E_theta,
    psi,
    psi_hat,
    theta3_product,
    theta3_series,
)
from .multilevel import (
    LevelReport,
    RunConfig,
    decay_ratios,
    multilevel_error,
    multilevel_sampled,
    multilevel_spectral,
    run,
)
from .spectral import (
    DEFAULT_SPEC,
    CosineSeries,
    EvalSpec,
    GridSamples,
    eval_series,
    qi_eval_direct,
    qi_spectral,
    sample,
    sobolev_norm,
    sup_norm_estimate,
    wiener_norm,
)

__version__ = "0.1.0"


def backend() -> str:
    """Name of the active kernel implementation ("cython" or "python")."""
    return _backend.kernels.name
