import math

import mpmath
import numpy as np
import pytest
from scipy.special import zeta

from mlqi.analysis import (
    LEMMA_IDS,
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
    truncation_discrepancies,
    truncation_history,
    truncation_norm,
    verify_truncation,
)
from mlqi.kernel import bound_constants, psi_hat
from mlqi.multilevel import RunConfig, multilevel_spectral
from mlqi.spectral import CosineSeries, qi_spectral

MATRIX = [(1, 2, 6), (1, 3, 6), (3, 3, 6), (0, 2, 4), (5, 4, 6)]
mpmath.mp.dps = 40


def mp_psi_hat(t):
    return float(mpmath.exp(-2 * mpmath.pi**2 * mpmath.mpf(t) ** 2))


def test_init_truncation_values():
    s = init_truncation(1, 2)
    assert s.p == 1 and s.alpha.size == 2
    assert s.alpha[0] == pytest.approx(1 - mp_psi_hat(0.25), rel=1e-12)
    assert s.alpha[0] == pytest.approx(0.70874, rel=1e-4)
    assert s.alpha_bar[1] == pytest.approx(-mp_psi_hat(0.75), rel=1e-12)
    assert s.alpha[1] == pytest.approx(-mp_psi_hat(1.25), rel=1e-12)
    assert s.alpha_bar[0] == pytest.approx(-mp_psi_hat(1.75), rel=1e-12)


def test_init_truncation_constant():
    assert init_truncation(0, 2).alpha[0] == 0.0


def test_init_norm_bounded_by_A():
    s = init_truncation(1, 2)
    assert truncation_norm(s) <= bound_constants().A
    ref = (1 - mp_psi_hat(0.25)) + mp_psi_hat(0.75) + mp_psi_hat(1.25) + mp_psi_hat(1.75)
    assert truncation_norm(s) == pytest.approx(ref, rel=1e-14)


def test_step_truncation_example():
    s1 = init_truncation(1, 2)
    s2 = step_truncation(s1)
    expected = s1.alpha[0] - (s1.alpha_bar[0] + s1.alpha[0]) * mp_psi_hat(0.125)
    assert s2.alpha[0] == pytest.approx(expected, rel=1e-13)
    assert s2.alpha[0] == pytest.approx(0.18812, rel=1e-4)


def test_structure():
    states = truncation_history(1, 2, 5)
    for p, s in enumerate(states):
        assert s.p == p
        assert s.alpha.size == s.alpha_bar.size == 2**p
        assert np.all(np.isfinite(s.alpha)) and np.all(np.isfinite(s.alpha_bar))
    assert states[3].alpha.size + states[3].alpha_bar.size == 16


def test_remainder_budget():
    k = bound_constants()
    for s in truncation_history(1, 2, 6)[1:]:
        assert s.remainder_budget == pytest.approx(s.p * k.A ** (s.p - 1) * k.epsilon)


def test_norm_of_zero_state():
    s = TruncationState(2, 1, 2, np.zeros(4), np.zeros(4))
    assert truncation_norm(s) == 0.0


def test_state_validation():
    with pytest.raises(ValueError):
        TruncationState(2, 1, 2, np.zeros(3), np.zeros(4))


@pytest.mark.parametrize("m,ell", [(4, 3), (2, 2), (1, 1), (-1, 3)])
def test_low_frequency_precondition(m, ell):
    with pytest.raises(ValueError, match="requires"):
        init_truncation(m, ell)


def test_precondition_message():
    with pytest.raises(ValueError, match=r"requires m < 2\^\{ell-1\}"):
        truncation_history(4, 3, 2)


def test_level_cap():
    with pytest.raises(ValueError):
        truncation_history(1, 2, 9)


def test_to_series_matches_frequencies():
    s = init_truncation(1, 2)
    f = s.to_series()
    # alpha_bar at |1 - (2 - j) 4|: 7, 3; alpha at 1 + 4 j: 1, 5
    assert f.coeffs[7] == s.alpha_bar[0]
    assert f.coeffs[3] == s.alpha_bar[1]
    assert f.coeffs[1] == s.alpha[0]
    assert f.coeffs[5] == s.alpha[1]


@pytest.mark.parametrize("m,ell,levels", MATRIX + [(1, 2, 5), (0, 2, 3), (3, 3, 5)])
def test_verify_truncation(m, ell, levels):
    assert verify_truncation(m, ell, levels) <= 1e-11


def test_discrepancies_per_level():
    gaps = truncation_discrepancies(1, 2, 4)
    assert len(gaps) == 4


@pytest.mark.parametrize("m,ell", [(1, 2), (1, 3), (3, 3), (0, 2), (5, 4), (3, 4)])
def test_norm_bounds(m, ell):
    big_a = bound_constants().A
    for s in truncation_history(m, ell, 8)[1:]:
        norm = truncation_norm(s)
        assert norm <= big_a**s.p
        if s.p >= 3:
            assert norm <= 10 * 0.9**s.p


@pytest.mark.parametrize("m,ell", [(1, 2), (1, 3), (3, 3), (0, 2), (5, 4), (3, 4)])
def test_rate(m, ell):
    norms = [truncation_norm(s) for s in truncation_history(m, ell, 7)]
    for p in range(4, 8):
        if norms[p - 1] > 0:
            assert norms[p] / norms[p - 1] <= 0.9


@pytest.mark.parametrize("m,ell,levels", MATRIX[:3] + [(0, 2, 7), (5, 4, 7), (3, 4, 7)])
def test_scan_has_no_violations(m, ell, levels):
    reports = scan_lemma_bounds(m, ell, levels)
    assert [r.lemma_id for r in reports] == list(LEMMA_IDS)
    for r in reports:
        assert r.ok, (r.lemma_id, r.violations[:3])
        assert r.checked > 0


def test_scan_short_range():
    reports = {r.lemma_id: r for r in scan_lemma_bounds(1, 2, 2)}
    assert reports["L5"].checked == 0 and reports["L6"].checked == 0
    assert reports["L3"].checked > 0


def test_scan_detects_violation():
    from mlqi.analysis import BoundScanReport

    r = BoundScanReport("L3")
    r._check(2, 0, np.array([1.0, 3.0]), np.array([2.0, 2.0]))
    assert r.checked == 2
    assert not r.ok and r.violations[0][:2] == (2, 1)


def test_mp_table_consistent():
    mp = mp_sequence(10)
    assert mp[1] == pytest.approx((1 - psi_hat(0.5)) * (1 - psi_hat(0.25)), rel=1e-15)
    assert mp[1] == pytest.approx(7.04e-1, rel=1e-3)
    assert mp[4] == pytest.approx(2.65e-4, rel=0.02)
    assert mp[7] == pytest.approx(4.6e-13, rel=0.02)


def test_mp_as_printed_is_c1_coefficient():
    # the as-printed product is the surviving c_1 coefficient after p + 1 levels from h = 1
    printed = mp_sequence(6, "as-printed")
    reports = multilevel_spectral(CosineSeries.cosine(1), RunConfig(ell0=0, levels=7))
    for p in range(1, 7):
        assert reports[p].residual.coeffs[1] == pytest.approx(printed[p - 1], rel=1e-12)


def test_mp_variants_and_errors():
    assert mp_sequence(3, "as-printed")[2] != mp_sequence(3)[2]
    with pytest.raises(ValueError):
        mp_sequence(0)
    with pytest.raises(ValueError):
        mp_sequence(3, "other")


def test_c_of_t_against_hurwitz_zeta():
    for t, p in ((1.0, 10), (0.75, 6), (1.5, 4)):
        ref = math.sqrt(zeta(2 * t, 2 ** (p - 2)))
        assert c_of_t(t, p) == pytest.approx(ref, rel=1e-3)
    assert c_of_t(1.0, 10) == pytest.approx(6.25e-2, rel=0.01)
    assert c_of_t(1.0, 10) ** 2 == pytest.approx(3.91e-3, rel=0.01)


def test_c_of_t_is_conservative():
    assert c_of_t(0.75, 6) >= math.sqrt(zeta(1.5, 16))


def test_d_of_s():
    values = [d_of_s(s, 12) for s in (3.0, 2.0, 1.5, 1.0)]
    assert all(math.isfinite(v) for v in values)
    assert all(a < b for a, b in zip(values, values[1:]))
    assert d_of_s(2.0, 3) == pytest.approx(0.9**-2)


def test_theorem_bound_components():
    terms = theorem_bound_terms(3, 1, 10, 1.0, 10)
    k = bound_constants()
    assert terms["tail"] == pytest.approx(c_of_t(1, 10) * k.A**10 * 2.0**-16, rel=1e-14)
    assert terms["total"] == pytest.approx(terms["truncation"] + terms["tail"] + terms["remainder"])
    assert 0 < terms["total"] < math.inf
    assert theorem_bound(3, 1, 10, 2.0) == pytest.approx(2 * terms["total"])


def test_theorem_bound_decays():
    for p in range(5, 20):
        assert theorem_bound(3, 1, p + 1) / theorem_bound(3, 1, p) <= 0.95


@pytest.mark.parametrize("s,t,p,b", [(1, 0.4, 5, 10), (0.9, 0.7, 5, 10), (2, 2, 5, 10), (3, 1, 2, 10), (3, 1, 5, 0)])
def test_theorem_bound_rejects(s, t, p, b):
    with pytest.raises(ValueError, match="requires"):
        theorem_bound(s, t, p, 1.0, b)


@pytest.mark.parametrize("ell,n,p", [(3, 1, 3), (3, 1, 4), (3, 5, 6), (2, 3, 5), (0, 0, 1), (1, 1, 2), (2, 0, 6)])
def test_highfreq_identity(ell, n, p):
    assert highfreq_identity_check(ell, n, p) <= 1e-11


def test_highfreq_base_case():
    # m = 1, one level: M_{1,1} c_1 = c_1 - Q_1 c_0 since c_1 and c_0 agree on the integers
    lhs = multilevel_spectral(CosineSeries.cosine(1), RunConfig(levels=1))[0].residual
    rhs = CosineSeries.cosine(1) - qi_spectral(CosineSeries.cosine(0), 0)
    top = max(lhs.M, rhs.M)
    np.testing.assert_allclose(lhs.padded(top), rhs.padded(top), atol=1e-16)


@pytest.mark.parametrize("ell,n,p", [(2, 4, 3), (-1, 0, 1), (2, 1, 7), (2, 1, 0)])
def test_highfreq_rejects(ell, n, p):
    with pytest.raises(ValueError):
        highfreq_identity_check(ell, n, p)
