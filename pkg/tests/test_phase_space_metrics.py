"""Metric matrices, causal classification, and null-surface geometry."""

import numpy as np
import pytest

from recrel.errors import (
    DimensionMismatchError,
    NonTimelikeStateError,
    NoNullVelocityError,
)
from recrel.phase_space_metrics import (
    Displacement,
    KinematicState,
    MetricSpec,
    gamma_factor,
    interval_class,
    line_element,
    mass_interval_squared,
    mass_rate_squared,
    null_cone_angles,
    null_cone_sample,
    null_surface_residual,
    null_velocity,
    proper_time_rate_squared,
)


def _random_state(rng, n, c=1.0, b=1.0, inside=True):
    # rejection-sample states strictly inside the null hypersurface
    while True:
        s = KinematicState(
            v=rng.uniform(-0.9, 0.9, n) * c,
            f=rng.uniform(-0.9, 0.9, n) * b,
            r=rng.uniform(-0.9, 0.9) * c * b,
        )
        if not inside or null_surface_residual(s, c, b) > 0.05:
            return s


# ------------------------------------------------------------- metric matrix


def test_born_matrix_diagonal():
    m = MetricSpec.born(n=2, c=3.0, b=5.0)
    expected = np.diag([1.0, -1 / 9.0, -1 / 9.0, 1 / 225.0, -1 / 25.0, -1 / 25.0])
    assert np.allclose(m.matrix(), expected, atol=1e-15)
    assert abs(np.linalg.det(m.matrix())) > 0


def test_minkowski_and_newton_matrices_are_degenerate_paddings():
    mink = MetricSpec.minkowski(n=2, c=2.0).matrix()
    assert np.allclose(mink, np.diag([1.0, -0.25, -0.25, 0.0, 0.0, 0.0]), atol=1e-15)
    newt = MetricSpec.newton(n=2).matrix()
    assert np.array_equal(newt, np.diag([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]))


def test_metric_spec_validation():
    with pytest.raises(ValueError):
        MetricSpec("euclidean", 1)
    with pytest.raises(ValueError):
        MetricSpec.born(1, c=-1.0)
    with pytest.raises(ValueError):
        MetricSpec.born(1, c=1.0, b=0.0)
    with pytest.raises(DimensionMismatchError):
        MetricSpec.born(0)
    # Newton needs no scales at all
    assert MetricSpec.newton(3).kind == "newton"


# ------------------------------------------------------------- line element


def test_line_element_pure_time():
    d = Displacement(1.0, [0.0], 0.0, [0.0])
    assert line_element(MetricSpec.born(), d) == 1.0


def test_line_element_null_at_light_speed():
    d = Displacement(1.0, [1.0], 0.0, [0.0])
    assert line_element(MetricSpec.born(), d) == 0.0


def test_line_element_mixed_value():
    d = Displacement(1.0, [0.5], 0.5, [0.5])
    assert abs(line_element(MetricSpec.born(), d) - 0.75) < 1e-15


def test_line_element_matches_closed_form_for_swept_states():
    rng = np.random.default_rng(101)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        c, b = rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)
        s = _random_state(rng, n, c, b, inside=False)
        dt = rng.uniform(0.1, 2.0)
        ds2 = line_element(MetricSpec.born(n, c, b), s.displacement(dt))
        assert abs(ds2 - dt**2 * null_surface_residual(s, c, b)) < 1e-12


def test_line_element_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        line_element(MetricSpec.born(n=2), Displacement(1.0, [0.0], 0.0, [0.0]))


def test_interval_classification():
    m = MetricSpec.born()
    assert interval_class(m, Displacement(1.0, [0.0], 0.0, [0.0])) == "timelike"
    assert interval_class(m, Displacement(1.0, [1.0], 0.0, [0.0])) == "null"
    assert interval_class(m, Displacement(0.0, [1.0], 0.0, [0.0])) == "spacelike"
    # tolerance maps small values to null
    assert interval_class(m, Displacement(1.0, [1.0 + 1e-9], 0.0, [0.0]), tol=1e-6) == "null"


def test_interval_split_into_proper_time_and_mass_parts():
    rng = np.random.default_rng(103)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        c, b = rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)
        d = Displacement(
            rng.standard_normal(), rng.standard_normal(n), rng.standard_normal(), rng.standard_normal(n)
        )
        ds2 = line_element(MetricSpec.born(n, c, b), d)
        split = proper_time_rate_squared(d, c) + (c**2 / b**2) * mass_interval_squared(d, c)
        assert abs(ds2 - split) < 1e-12


# ------------------------------------------------------- gamma and mass rate


def test_gamma_factor_rest_state():
    assert gamma_factor(KinematicState([0.0], [0.0], 0.0)) == 1.0


def test_gamma_factor_matches_velocity_only_dilation():
    c = 2.0
    g = gamma_factor(KinematicState([0.6 * c], [0.0], 0.0), c=c, b=1.0)
    assert abs(g - 1.25) < 1e-14
    rng = np.random.default_rng(107)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        v = rng.uniform(-0.99, 0.99) * rng.standard_normal(n)
        v = v / max(1.0, np.linalg.norm(v) / 0.99)
        sr = 1.0 / np.sqrt(1.0 - float(v @ v))
        g = gamma_factor(KinematicState(v, np.zeros(n), 0.0), c=1.0, b=7.3)
        assert abs(g - sr) <= 1e-14 * sr


def test_gamma_factor_drops_below_one_with_power():
    g = gamma_factor(KinematicState([0.0], [0.0], 1.0), c=1.0, b=1.0)
    assert abs(g - 1.0 / np.sqrt(2.0)) < 1e-15


def test_gamma_factor_rejects_null_and_spacelike_states():
    with pytest.raises(NonTimelikeStateError):
        gamma_factor(KinematicState([1.0], [0.0], 0.0))
    with pytest.raises(NonTimelikeStateError):
        gamma_factor(KinematicState([2.0], [0.0], 0.0))


def test_mass_rate_squared_values():
    assert mass_rate_squared(KinematicState([0.0], [0.0], 0.0)) == 0.0
    assert mass_rate_squared(KinematicState([0.0], [1.0], 0.0), c=1.0) == -1.0
    assert mass_rate_squared(KinematicState([0.0], [0.0], 1.0), c=1.0) == 1.0


def test_gamma_identity_with_mass_rate():
    # 1/gamma^2 = 1 - v^2/c^2 + (c^2/b^2) (d mu / d t)^2 for states inside
    # the null surface
    rng = np.random.default_rng(109)
    for _ in range(60):
        n = int(rng.integers(1, 4))
        c, b = rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)
        s = _random_state(rng, n, c, b)
        lhs = 1.0 / gamma_factor(s, c, b) ** 2
        rhs = 1.0 - float(s.v @ s.v) / c**2 + (c**2 / b**2) * mass_rate_squared(s, c)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


# ---------------------------------------------------------- degenerate limits


def test_born_tends_to_minkowski_as_b_grows():
    rng = np.random.default_rng(113)
    c = 1.7
    for _ in range(20):
        n = int(rng.integers(1, 4))
        d = Displacement(
            rng.standard_normal(), rng.standard_normal(n), rng.standard_normal(), rng.standard_normal(n)
        )
        mink = line_element(MetricSpec.minkowski(n, c), d)
        diffs = []
        for b in (1e3, 1e6):
            diffs.append(abs(line_element(MetricSpec.born(n, c, b), d) - mink))
        # difference carries the 1/b^2 factor
        assert diffs[1] <= diffs[0] * 1e-5 or diffs[1] < 1e-18


def test_minkowski_tends_to_newton_as_c_grows():
    rng = np.random.default_rng(127)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        d = Displacement(
            rng.standard_normal(), rng.standard_normal(n), rng.standard_normal(), rng.standard_normal(n)
        )
        newt = line_element(MetricSpec.newton(n), d)
        diffs = [
            abs(line_element(MetricSpec.minkowski(n, c), d) - newt) for c in (1e3, 1e6)
        ]
        assert diffs[1] <= diffs[0] * 1e-5 or diffs[1] < 1e-18


# ------------------------------------------------------------- null surface


def test_null_surface_residual_anchors():
    assert null_surface_residual(KinematicState([1.0], [0.0], 0.0)) == 0.0
    assert null_surface_residual(KinematicState([0.0], [1.0], 0.0)) == 0.0
    assert null_surface_residual(KinematicState([0.0], [0.0], 0.0)) == 1.0


def test_null_velocity_anchors():
    vp, vm = null_velocity(0.0, 0.0, c=2.0, b=3.0)
    assert vp == 2.0 and vm == -2.0
    vp, vm = null_velocity(3.0, 0.0, c=2.0, b=3.0)
    assert vp == 0.0 and vm == 0.0
    # f = 0, r = 2bc lands at sqrt(5) c, not an integer multiple of c
    c, b = 1.3, 0.7
    vp, _ = null_velocity(0.0, 2.0 * b * c, c=c, b=b)
    assert abs(vp - np.sqrt(5.0) * c) < 1e-14 * c


def test_null_velocity_rejects_empty_radicand():
    with pytest.raises(NoNullVelocityError):
        null_velocity(2.0, 0.0, c=1.0, b=1.0)


def test_null_velocity_points_lie_on_surface():
    rng = np.random.default_rng(131)
    for _ in range(40):
        c, b = rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)
        f = rng.uniform(0.0, 0.9) * b
        r = rng.uniform(-2.0, 2.0) * b * c
        vp, vm = null_velocity(f, r, c, b)
        for v in (vp, vm):
            s = KinematicState([v], [f], r)
            assert abs(null_surface_residual(s, c, b)) < 1e-12


def test_null_cone_sample_axes_and_residuals():
    pts = null_cone_sample(0.0, c=1.0, b=1.0, count=4)
    arr = np.array(pts)
    assert np.allclose(arr[:, 0], [1.0, 0.0, -1.0, 0.0], atol=1e-15)
    assert np.allclose(arr[:, 1], [0.0, 1.0, 0.0, -1.0], atol=1e-15)
    rng = np.random.default_rng(137)
    for _ in range(10):
        c, b = rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)
        r = rng.uniform(-2.0, 2.0) * b * c
        for v, f in null_cone_sample(r, c, b, count=17):
            assert abs(null_surface_residual(KinematicState([v], [f], r), c, b)) <= 1e-12


def test_null_cone_sample_scales_with_power():
    base = np.array(null_cone_sample(0.0, c=1.0, b=1.0, count=8))
    lifted = np.array(null_cone_sample(1.0, c=1.0, b=1.0, count=8))
    assert np.allclose(lifted, np.sqrt(2.0) * base, atol=1e-14)


def test_null_cone_angles_grid():
    ang = null_cone_angles(4)
    assert np.allclose(ang, [0.0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-15)
    with pytest.raises(ValueError):
        null_cone_angles(0)


# ---------------------------------------------------------------- pure types


def test_displacement_vector_round_trip():
    d = Displacement(1.0, [2.0, 3.0], 4.0, [5.0, 6.0])
    assert np.array_equal(d.vector(), [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    back = Displacement.from_vector(d.vector())
    assert back.dt == d.dt and back.de == d.de
    assert np.array_equal(back.dq, d.dq) and np.array_equal(back.dp, d.dp)


def test_state_displacement_sweep():
    s = KinematicState([0.25], [0.5], 0.75)
    d = s.displacement(2.0)
    assert d.dt == 2.0 and d.dq[0] == 0.5 and d.de == 1.5 and d.dp[0] == 1.0


def test_type_validation():
    with pytest.raises(DimensionMismatchError):
        KinematicState([1.0, 2.0], [0.0], 0.0)
    with pytest.raises(ValueError):
        Displacement(np.inf, [0.0], 0.0, [0.0])
    with pytest.raises(DimensionMismatchError):
        Displacement(0.0, [0.0, 1.0], 0.0, [0.0])
