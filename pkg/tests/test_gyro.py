import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import ball_points, rel_err
from hyperball import gyro
from hyperball.errors import ContractViolation, DomainError
import oracles

CS = [0.5, 1.0, 2.0]


@pytest.fixture
def rng():
    return np.random.default_rng(0)


# ---- curvature and contracts -------------------------------------------------


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_curvature_must_be_positive_and_finite(bad):
    with pytest.raises(ContractViolation):
        gyro.mobius_add([0.1], [0.2], c=bad)


def test_dimension_mismatch_is_a_contract_violation():
    with pytest.raises(ContractViolation):
        gyro.mobius_add([0.1, 0.2], [0.1], c=1.0)
    with pytest.raises(ContractViolation):
        gyro.mobius_coadd([0.1, 0.2], [0.1], c=1.0)
    with pytest.raises(ContractViolation):
        gyro.gyration([0.1, 0.2], [0.1, 0.0], [1.0], c=1.0)


def test_conformal_and_gamma_factors_relation(rng):
    x = ball_points(rng, (100, 3), 1.3)
    lam = gyro.conformal_factor(x, c=1.3)
    gam = gyro.gamma_factor(x, c=1.3)
    assert np.all(lam > 1.0) and np.all(gam >= 1.0)
    np.testing.assert_allclose(lam, 2.0 * gam**2, rtol=1e-13)


def test_projection_clamps_to_stability_radius():
    c = 2.0
    x = np.array([10.0, 0.0])
    p = gyro.project(x, c=c)
    assert np.linalg.norm(p) == pytest.approx((1 - gyro.BALL_EPS) / math.sqrt(c), rel=1e-15)
    inside = np.array([0.1, 0.2])
    assert np.array_equal(gyro.project(inside, c=c), inside)


# ---- Möbius addition ------------------------------------------------------------


def test_mobius_add_identity_and_inverse(rng):
    y = ball_points(rng, (5, 4), 1.0)
    np.testing.assert_array_equal(gyro.mobius_add(np.zeros(4), y, c=1.0), y)
    np.testing.assert_allclose(gyro.mobius_add(y, -y, c=1.0), 0.0, atol=1e-15)


def test_mobius_add_one_dimensional_value():
    # 1-D closed form (x + y) / (1 + c x y) = 0.7 / 1.12
    assert gyro.mobius_add([0.3], [0.4], c=1.0)[0] == pytest.approx(0.625, abs=1e-15)


def test_mobius_add_matches_high_precision_oracle(rng):
    for c in CS:
        x, y = ball_points(rng, (2, 6), c)
        expected = oracles.to_floats(oracles.mobius_add(x, y, c))
        np.testing.assert_allclose(gyro.mobius_add(x, y, c=c), expected, atol=1e-14)


def test_mobius_add_output_stays_in_ball(rng):
    c = 1.0
    x = ball_points(rng, (1000, 3), c, max_dist=30.0)
    y = ball_points(rng, (1000, 3), c, max_dist=30.0)
    out = gyro.mobius_add(x, y, c=c)
    assert np.all(np.linalg.norm(out, axis=-1) <= (1 - gyro.BALL_EPS) / math.sqrt(c) * (1 + 1e-15))


def test_mobius_sub_is_addition_of_negation(rng):
    x, y = ball_points(rng, (2, 3), 1.0)
    np.testing.assert_array_equal(gyro.mobius_sub(x, y, c=1.0), gyro.mobius_add(x, -y, c=1.0))


def test_euclidean_limit_of_addition(rng):
    x = rng.uniform(-1, 1, size=(200, 3))
    x /= np.maximum(1.0, np.linalg.norm(x, axis=-1, keepdims=True))
    y = rng.uniform(-1, 1, size=(200, 3))
    y /= np.maximum(1.0, np.linalg.norm(y, axis=-1, keepdims=True))
    out = gyro.mobius_add(x, y, c=1e-10)
    assert rel_err(out, x + y, floor=1e-3) < 1e-4


# ---- coaddition ---------------------------------------------------------------------


def test_coadd_is_exactly_commutative(rng):
    for c in CS:
        x = ball_points(rng, (500, 5), c)
        y = ball_points(rng, (500, 5), c)
        assert np.array_equal(gyro.mobius_coadd(x, y, c=c), gyro.mobius_coadd(y, x, c=c))


def test_coadd_identity(rng):
    y = ball_points(rng, (4, 3), 1.0)
    np.testing.assert_array_equal(gyro.mobius_coadd(np.zeros(3), y, c=1.0), y)


def test_coadd_matches_gamma_form(rng):
    for c in CS:
        x = ball_points(rng, (50, 3), c)
        y = ball_points(rng, (50, 3), c)
        gx2 = gyro.gamma_factor(x, c=c) ** 2
        gy2 = gyro.gamma_factor(y, c=c) ** 2
        expected = (gx2 * x + gy2 * y) / (gx2 + gy2 - 1.0)
        np.testing.assert_allclose(gyro.mobius_coadd(x, y, c=c), expected, rtol=1e-11, atol=1e-13)


def test_coadd_with_itself(rng):
    c = 1.0
    x = ball_points(rng, (20, 3), c)
    g2 = gyro.gamma_factor(x, c=c) ** 2
    np.testing.assert_allclose(gyro.mobius_coadd(x, x, c=c), 2 * g2 * x / (2 * g2 - 1), rtol=1e-12)


# ---- scalar multiplication ----------------------------------------------------------


def test_scalar_mul_identities(rng):
    x = ball_points(rng, (10, 3), 1.0)
    np.testing.assert_allclose(gyro.mobius_scalar_mul(1.0, x, c=1.0), x, atol=1e-15)
    np.testing.assert_array_equal(gyro.mobius_scalar_mul(0.0, x, c=1.0), np.zeros_like(x))


def test_scalar_mul_scales_distance_from_origin(rng):
    for c in CS:
        x = ball_points(rng, (100, 4), c, max_dist=2.0)
        r = rng.uniform(-3, 3, size=100)
        out = gyro.mobius_scalar_mul(r, x, c=c)
        d0 = gyro.distance(np.zeros(4), x, c=c)
        np.testing.assert_allclose(gyro.distance(np.zeros(4), out, c=c), np.abs(r) * d0, rtol=1e-10, atol=1e-12)


def test_scalar_mul_equals_exp_of_scaled_log(rng):
    c = 0.7
    x = ball_points(rng, (50, 3), c)
    r = rng.normal(size=(50, 1))
    expected = gyro.expmap0(r * gyro.logmap0(x, c=c), c=c)
    np.testing.assert_allclose(gyro.mobius_scalar_mul(r, x, c=c), expected, atol=1e-13)


def test_half_scalar_mul_closed_form(rng):
    c = 1.5
    w = ball_points(rng, (50, 3), c)
    closed = w / (1.0 + np.sqrt(1.0 - c * np.sum(w * w, axis=-1, keepdims=True)))
    np.testing.assert_allclose(gyro.mobius_scalar_mul(0.5, w, c=c), closed, atol=1e-14)


# ---- gyration ------------------------------------------------------------------------------


def test_gyration_trivial_cases(rng):
    x, y = ball_points(rng, (2, 3), 1.0)
    z = rng.normal(size=3)
    np.testing.assert_allclose(gyro.gyration(x, np.zeros(3), z, c=1.0), z, atol=1e-15)
    np.testing.assert_allclose(gyro.gyration(np.zeros(3), y, z, c=1.0), z, atol=1e-15)


def test_gyration_matches_addition_composition(rng):
    for c in CS:
        x, y, z = (ball_points(rng, (200, 4), c, max_dist=2.0) for _ in range(3))
        left = gyro.mobius_add(-gyro.mobius_add(x, y, c=c), gyro.mobius_add(x, gyro.mobius_add(y, z, c=c), c=c), c=c)
        np.testing.assert_allclose(gyro.gyration(x, y, z, c=c), left, atol=1e-11)


def test_gyration_is_orthogonal(rng):
    for c in CS:
        x, y = (ball_points(rng, (500, 8), c) for _ in range(2))
        z = rng.normal(size=(500, 8))
        ratio = np.linalg.norm(gyro.gyration(x, y, z, c=c), axis=-1) / np.linalg.norm(z, axis=-1)
        assert np.all(np.abs(ratio - 1.0) < 1e-9)


# ---- exp / log -----------------------------------------------------------------------------


def test_exp_at_zero_vector_is_base(rng):
    x = ball_points(rng, (5, 3), 1.0)
    np.testing.assert_allclose(gyro.expmap(x, np.zeros(3), c=1.0), x, atol=1e-16)


@pytest.mark.parametrize("c", CS)
def test_exp_at_origin_closed_form(c):
    v = np.array([3.0, 4.0]) / 5.0 * math.atanh(0.5) / math.sqrt(c)
    out = gyro.expmap(np.zeros(2), v, c=c)
    assert np.linalg.norm(out) == pytest.approx(0.5 / math.sqrt(c), rel=1e-14)
    np.testing.assert_allclose(gyro.expmap0(v, c=c), out, atol=1e-16)


def test_log_of_base_is_zero(rng):
    x = ball_points(rng, (5, 3), 1.0)
    np.testing.assert_allclose(gyro.logmap(x, x, c=1.0), 0.0, atol=1e-13)


@pytest.mark.parametrize("c", CS)
def test_log_at_origin_closed_form(c, rng):
    y = ball_points(rng, (10, 3), c)
    n = np.linalg.norm(y, axis=-1, keepdims=True)
    expected = np.arctanh(math.sqrt(c) * n) / math.sqrt(c) * y / n
    np.testing.assert_allclose(gyro.logmap(np.zeros(3), y, c=c), expected, rtol=1e-13)
    np.testing.assert_allclose(gyro.logmap0(y, c=c), expected, rtol=1e-13)


def test_exp_log_roundtrip(rng):
    for c in CS:
        x, y = (ball_points(rng, (500, 5), c) for _ in range(2))
        np.testing.assert_allclose(gyro.expmap(x, gyro.logmap(x, y, c=c), c=c), y, atol=1e-10)
        v = rng.normal(size=(500, 5)) / gyro.conformal_factor(x, c=c)
        np.testing.assert_allclose(gyro.logmap(x, gyro.expmap(x, v, c=c), c=c), v, atol=1e-10)


def test_log_clamps_points_outside_the_ball():
    out = gyro.logmap(np.zeros(2), np.array([2.0, 0.0]), c=1.0)
    assert np.all(np.isfinite(out))
    edge = gyro.project(np.array([2.0, 0.0]), c=1.0)
    np.testing.assert_allclose(out, gyro.logmap0(edge, c=1.0))


def test_log_norm_identity_with_distance(rng):
    for c in CS:
        x, y = (ball_points(rng, (500, 3), c) for _ in range(2))
        rn = gyro.riemannian_norm(x, gyro.logmap(x, y, c=c), c=c)
        np.testing.assert_allclose(rn, gyro.distance(x, y, c=c), rtol=1e-9, atol=1e-12)


# ---- distance ------------------------------------------------------------------------------


def test_distance_examples(rng):
    x = ball_points(rng, (5, 3), 2.0)
    np.testing.assert_allclose(gyro.distance(x, x, c=2.0), 0.0, atol=1e-7)
    d0 = gyro.distance(np.zeros(3), x, c=2.0)
    expected = 2 / math.sqrt(2.0) * np.arctanh(math.sqrt(2.0) * np.linalg.norm(x, axis=-1))
    np.testing.assert_allclose(d0, expected, rtol=1e-13)


def test_distance_one_dimensional_value():
    # -0.3 ⊕ 0.625 = 0.4 in one dimension
    assert gyro.mobius_add([-0.3], [0.625], c=1.0)[0] == pytest.approx(0.4, abs=1e-15)
    d = float(gyro.distance([0.3], [0.625], c=1.0))
    assert d == pytest.approx(2 * math.atanh(0.4), abs=1e-14)
    assert d == pytest.approx(float(oracles.distance([0.3], [0.625], 1.0)), abs=1e-14)
    assert round(d, 4) == 0.8473


def test_distance_symmetry_and_triangle(rng):
    for c in CS:
        x, y, z = (ball_points(rng, (1000, 3), c) for _ in range(3))
        dxy = gyro.distance(x, y, c=c)
        np.testing.assert_allclose(dxy, gyro.distance(y, x, c=c), rtol=1e-9, atol=1e-12)
        assert np.all(dxy <= gyro.distance(x, z, c=c) + gyro.distance(z, y, c=c) + 1e-9)


def test_distance_matches_oracle(rng):
    for c in CS:
        x, y = ball_points(rng, (2, 5), c)
        assert float(gyro.distance(x, y, c=c)) == pytest.approx(float(oracles.distance(x, y, c)), rel=1e-12)


# ---- addition norm --------------------------------------------------------------------------


def test_addition_norm_examples(rng):
    y = ball_points(rng, (5, 3), 1.0)
    np.testing.assert_allclose(gyro.addition_norm(np.zeros(3), y, c=1.0), np.linalg.norm(y, axis=-1), rtol=1e-15)
    np.testing.assert_allclose(gyro.addition_norm(y, -y, c=1.0), 0.0, atol=0)


def test_addition_norm_matches_norm_of_sum_and_is_symmetric(rng):
    for c in CS:
        x, y = (ball_points(rng, (500, 4), c) for _ in range(2))
        an = gyro.addition_norm(x, y, c=c)
        np.testing.assert_allclose(an, np.linalg.norm(gyro.mobius_add(x, y, c=c), axis=-1), rtol=1e-12)
        np.testing.assert_allclose(an, gyro.addition_norm(y, x, c=c), rtol=1e-14)


# ---- hyperplane distance --------------------------------------------------------------------


def test_hyperplane_distance_zero_cases(rng):
    p = ball_points(rng, (3,), 1.0)
    a = rng.normal(size=3)
    assert float(gyro.dist_to_hyperplane(p, p, a, c=1.0)) == 0.0
    # a point whose translate -p ⊕ x is orthogonal to a
    w = np.cross(a, rng.normal(size=3))
    w *= 0.3 / np.linalg.norm(w)
    x = gyro.mobius_add(p, w, c=1.0)
    assert float(gyro.dist_to_hyperplane(x, p, a, c=1.0)) < 1e-14


def test_hyperplane_distance_rejects_zero_orientation():
    with pytest.raises(DomainError):
        gyro.dist_to_hyperplane([0.1, 0.2], [0.0, 0.0], [0.0, 0.0], c=1.0)


def _sampled_hyperplane_distance(x, p, a, c, samples=100_000):
    """Minimum distance from x to points of the 2-D geodesic through p orthogonal to a."""
    t = np.array([-a[1], a[0]]) / np.linalg.norm(a)
    reach = float(gyro.distance(p, x, c=c)) + 1.0
    s = np.linspace(-reach, reach, samples)[:, None]
    pts = gyro.expmap(p, s * t / gyro.conformal_factor(p, c=c), c=c)
    return float(np.min(gyro.distance(x, pts, c=c)))


def test_hyperplane_distance_matches_sampling(rng):
    for i in range(10):
        c = CS[i % 3]
        x, p = ball_points(rng, (2, 2), c, max_dist=2.5)
        a = rng.normal(size=2)
        closed = float(gyro.dist_to_hyperplane(x, p, a, c=c))
        assert abs(closed - _sampled_hyperplane_distance(x, p, a, c)) < 1e-3


def test_signed_hyperplane_distance_sign(rng):
    p = ball_points(rng, (2,), 1.0)
    a = rng.normal(size=2)
    x_pos = gyro.expmap(p, 0.3 * a, c=1.0)
    x_neg = gyro.expmap(p, -0.3 * a, c=1.0)
    assert float(gyro.dist_to_hyperplane(x_pos, p, a, c=1.0, signed=True)) > 0
    assert float(gyro.dist_to_hyperplane(x_neg, p, a, c=1.0, signed=True)) < 0


# ---- parallel transport ----------------------------------------------------------------------


def test_transport_trivial_cases(rng):
    x, y = ball_points(rng, (2, 3), 1.3)
    v = rng.normal(size=3)
    np.testing.assert_allclose(gyro.parallel_transport(x, x, v, c=1.3), v, atol=1e-14)
    expected = (1.0 - 1.3 * np.dot(y, y)) * v
    np.testing.assert_allclose(gyro.parallel_transport(np.zeros(3), y, v, c=1.3), expected, atol=1e-15)


def test_transport_is_riemannian_isometry(rng):
    for c in CS:
        x, y = (ball_points(rng, (500, 6), c) for _ in range(2))
        v = rng.normal(size=(500, 6))
        out = gyro.parallel_transport(x, y, v, c=c)
        np.testing.assert_allclose(
            gyro.riemannian_norm(y, out, c=c), gyro.riemannian_norm(x, v, c=c), rtol=1e-9
        )


# ---- gyrogroup laws as properties -------------------------------------------------------------

coords = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def triples(draw):
    n = draw(st.sampled_from([1, 2, 8]))
    c = draw(st.sampled_from(CS))
    pts = []
    for _ in range(3):
        v = np.array(draw(st.lists(coords, min_size=n, max_size=n)))
        r = draw(st.floats(0.0, 0.95))
        nv = np.linalg.norm(v)
        pts.append(v / nv * r / math.sqrt(c) if nv > 0 else v * 0)
    return c, pts


@settings(max_examples=200, deadline=None)
@given(triples())
def test_gyrogroup_laws_property(case):
    c, (x, y, z) = case
    add = lambda a, b: gyro.mobius_add(a, b, c=c)  # noqa: E731
    tol = 1e-9
    np.testing.assert_allclose(add(-x, add(x, y)), y, atol=tol)
    np.testing.assert_allclose(add(x, add(y, z)), add(add(x, y), gyro.gyration(x, y, z, c=c)), atol=tol)
    np.testing.assert_allclose(add(x, y), gyro.gyration(x, y, add(y, x), c=c), atol=tol)


@settings(max_examples=200, deadline=None)
@given(triples())
def test_exp_log_inverse_property(case):
    c, (x, y, _) = case
    np.testing.assert_allclose(gyro.expmap(x, gyro.logmap(x, y, c=c), c=c), y, atol=1e-9 / math.sqrt(c))
