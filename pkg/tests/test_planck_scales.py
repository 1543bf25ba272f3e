"""Scale systems, identity residuals, and parameterization equivalence."""

import numpy as np
import pytest

from recrel.planck_scales import (
    CODATA_C,
    CODATA_G,
    CODATA_HBAR,
    PlanckScales,
    ScaleConstants,
    planck_from_cGh,
    planck_from_cbh,
    planck_scales,
    verify_identities,
)


def test_natural_units_give_unit_scales():
    s = planck_from_cbh(1.0, 1.0, 1.0)
    assert s.lambda_t == s.lambda_q == s.lambda_p == s.lambda_e == 1.0
    g = planck_from_cGh(1.0, 1.0, 1.0)
    assert g.lambda_t == g.lambda_q == g.lambda_p == g.lambda_e == 1.0


def test_codata_time_and_length_scales():
    s = planck_from_cGh(CODATA_C, CODATA_G, CODATA_HBAR)
    assert abs(s.lambda_t - 5.391e-44) < 0.001e-44
    assert abs(s.lambda_q - 1.616e-35) < 0.001e-35


def test_parameterizations_agree_at_unit_coupling():
    b = CODATA_C**4 / CODATA_G
    via_b = planck_from_cbh(CODATA_C, b, CODATA_HBAR)
    via_g = planck_from_cGh(CODATA_C, CODATA_G, CODATA_HBAR)
    for name in ("lambda_t", "lambda_q", "lambda_p", "lambda_e"):
        x, y = getattr(via_b, name), getattr(via_g, name)
        assert abs(x / y - 1.0) <= 1e-14


def test_parameterizations_related_by_coupling_root():
    rng = np.random.default_rng(263)
    for _ in range(20):
        c = rng.uniform(0.5, 5.0)
        b = rng.uniform(0.5, 5.0)
        hbar = rng.uniform(0.5, 5.0)
        alpha = 10.0 ** rng.uniform(-17.0, 0.0)
        via_b = planck_from_cbh(c, b, hbar)
        via_g = planck_from_cGh(c, alpha * c**4 / b, hbar)
        root = np.sqrt(alpha)
        assert abs(via_g.lambda_t / (root * via_b.lambda_t) - 1.0) < 1e-12
        assert abs(via_g.lambda_q / (root * via_b.lambda_q) - 1.0) < 1e-12
        assert abs(via_g.lambda_p * root / via_b.lambda_p - 1.0) < 1e-12
        assert abs(via_g.lambda_e * root / via_b.lambda_e - 1.0) < 1e-12


def test_identities_hold_by_construction():
    rng = np.random.default_rng(269)
    for _ in range(30):
        c = 10.0 ** rng.uniform(-3.0, 9.0)
        b = 10.0 ** rng.uniform(-3.0, 45.0)
        hbar = 10.0 ** rng.uniform(-35.0, 1.0)
        res = verify_identities(planck_from_cbh(c, b, hbar), c, b, hbar)
        assert len(res) == 6
        assert max(res.values()) <= 1e-14


def test_identities_all_zero_in_natural_units():
    res = verify_identities(PlanckScales(1.0, 1.0, 1.0, 1.0), 1.0, 1.0, 1.0)
    assert all(v == 0.0 for v in res.values())


def test_identity_residuals_detect_perturbation():
    base = planck_from_cbh(CODATA_C, CODATA_C**4 / CODATA_G, CODATA_HBAR)
    bumped = PlanckScales(base.lambda_t * 1.01, base.lambda_q, base.lambda_p, base.lambda_e)
    res = verify_identities(bumped, CODATA_C, CODATA_C**4 / CODATA_G, CODATA_HBAR)
    # the three identities touching lambda_t move by about 1e-2
    for key in (
        "lambda_q_over_lambda_t_eq_c",
        "lambda_t_lambda_e_eq_hbar",
        "lambda_p_over_lambda_t_eq_b",
    ):
        assert 0.005 < res[key] < 0.015
    for key in ("lambda_e_over_lambda_p_eq_c", "lambda_q_lambda_p_eq_hbar", "lambda_e_over_lambda_q_eq_b"):
        assert res[key] <= 1e-14


def test_scale_constants_reconciliation():
    s = ScaleConstants(c=2.0, hbar=3.0, b=5.0)
    assert abs(s.G - 16.0 / 5.0) < 1e-15
    g = ScaleConstants(c=2.0, hbar=3.0, G=4.0)
    assert abs(g.b - 4.0) < 1e-15
    both = ScaleConstants(c=2.0, hbar=3.0, b=5.0, G=16.0 / 5.0)
    assert both.alpha_G == 1.0
    with pytest.raises(ValueError):
        ScaleConstants(c=2.0, hbar=3.0, b=5.0, G=4.0)
    with pytest.raises(ValueError):
        ScaleConstants(c=2.0, hbar=3.0)
    with pytest.raises(ValueError):
        ScaleConstants(c=-1.0, hbar=3.0, b=5.0)
    coupled = ScaleConstants(c=2.0, hbar=3.0, b=5.0, alpha_G=0.5)
    assert abs(coupled.G - 0.5 * 16.0 / 5.0) < 1e-15


def test_planck_scales_from_constants():
    s = planck_scales(ScaleConstants(c=1.0, hbar=1.0, b=1.0))
    assert s.lambda_e == 1.0


def test_rejects_nonpositive_inputs():
    with pytest.raises(ValueError):
        planck_from_cbh(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        planck_from_cGh(1.0, 1.0, -2.0)
    with pytest.raises(ValueError):
        PlanckScales(1.0, 1.0, 0.0, 1.0)
