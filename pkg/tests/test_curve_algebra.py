import math

import numpy as np
import pytest
from numpy.polynomial import polynomial as npoly

from curve_algebra import (
    Curve,
    Poly,
    arc_length,
    condition_number,
    derivative,
    eval_poly,
    evaluate_curve,
    geometric_curve,
    random_gaussian_curve,
    rescale_to_unit,
    restrict,
    speed,
    speed_squared,
    weighted_coeff_norm,
)
from errors import EmptyDomainError, VanishingSpeedError


def test_poly_trims_trailing_zeros():
    assert Poly((1.0, 2.0, 0.0, 0.0)).coeffs == (1.0, 2.0)
    assert Poly((0.0, 0.0)).coeffs == (0.0,)
    assert Poly((0.0,)).is_zero
    assert Poly(()).degree == 0


def test_eval_poly_real_and_complex():
    p = Poly((1.0, 0.0, 1.0))
    assert eval_poly(p, 2.0) == 5.0
    assert isinstance(eval_poly(p, 2.0), float)
    assert eval_poly(p, 1j) == 0
    assert isinstance(eval_poly(p, 1j), complex)
    np.testing.assert_array_equal(eval_poly(p, np.array([0.0, 1.0])), [1.0, 2.0])


def test_derivative():
    assert derivative(Poly((5.0,))).coeffs == (0.0,)
    assert derivative(Poly((1.0, 2.0, 3.0))).coeffs == (2.0, 6.0)


def test_speed_squared_parabola(parabola):
    assert speed_squared(parabola).coeffs == (1.0, 0.0, 4.0)


def test_speed_squared_twisted(twisted):
    assert speed_squared(twisted).coeffs == (4.0, 0.0, -20.0, 0.0, 81.0)


def test_speed_squared_geometric_curve():
    sq = speed_squared(geometric_curve(5))
    expected = 3.0 * npoly.polymul([1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
    np.testing.assert_array_equal(sq.as_array(), expected)


def test_speed_of_line(line):
    np.testing.assert_array_equal(speed(line, np.linspace(-1, 1, 5)), np.ones(5))


def test_condition_number_line(line):
    data = condition_number(line)
    assert data.coeff_norm == 1.0
    assert data.min_speed == 1.0
    assert data.condition == 1.0


def test_condition_number_uses_interior_minimum(twisted):
    # speed^2 has its interior minimum at T^2 = 10/81
    t2 = 10.0 / 81.0
    expected = math.sqrt(81 * t2 * t2 - 20 * t2 + 4)
    assert condition_number(twisted).min_speed == pytest.approx(expected, rel=1e-9)


def test_vanishing_speed_is_rejected():
    cusp = Curve.from_coefficients([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0]])
    with pytest.raises(VanishingSpeedError):
        condition_number(cusp)
    with pytest.raises(VanishingSpeedError):
        condition_number(geometric_curve(2))
    with pytest.raises(VanishingSpeedError):
        condition_number(Curve.from_coefficients([[3.0], [1.0]]))


def test_rescale_to_unit_preserves_points():
    c = Curve.from_coefficients([[1.0, 2.0, -1.0], [0.5, 0.0, 0.0, 2.0]], domain=(0.0, 3.0))
    unit = rescale_to_unit(c)
    assert unit.is_canonical
    t = np.linspace(-1.0, 1.0, 11)
    s = 1.5 * (t + 1.0)
    original = np.stack([npoly.polyval(s, p.as_array()) for p in c.components], axis=-1)
    np.testing.assert_allclose(evaluate_curve(unit, t), original, rtol=1e-13, atol=1e-13)


def test_rescale_to_unit_keeps_canonical_curve(parabola):
    assert rescale_to_unit(parabola) is parabola


def test_rescale_rejects_empty_domain():
    with pytest.raises(EmptyDomainError):
        rescale_to_unit(Curve.from_coefficients([[0.0, 1.0]], domain=(1.0, 1.0)))
    with pytest.raises(EmptyDomainError):
        rescale_to_unit(Curve.from_coefficients([[0.0, 1.0]], domain=(2.0, 1.0)))


def test_restrict_halves_the_speed(parabola):
    right = restrict(parabola, (0.0, 1.0))
    # gamma(0.5 + 0.5 s): derivative picks up the factor 1/2
    np.testing.assert_allclose(speed(right, 0.0), 0.5 * speed(parabola, 0.5), rtol=1e-14)


def test_arc_length(line, parabola):
    assert arc_length(line) == pytest.approx(2.0, rel=1e-14)
    exact = math.sqrt(5.0) + math.asinh(2.0) / 2.0
    assert arc_length(parabola) == pytest.approx(exact, rel=1e-12)


def test_evaluate_curve_shapes(parabola):
    assert evaluate_curve(parabola, 0.5).shape == (2,)
    points = evaluate_curve(parabola, np.array([-1.0, 0.0, 1.0]))
    np.testing.assert_array_equal(points, [[-1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])


def test_random_gaussian_curve_shape():
    rng = np.random.Generator(np.random.Philox(3))
    c = random_gaussian_curve(7, 4, rng)
    assert c.dimension == 4
    assert c.degree == 7
    assert c.is_canonical


def test_geometric_curve():
    c = geometric_curve(3)
    assert c.dimension == 3
    assert all(p.coeffs == (1.0, 1.0, 1.0, 1.0) for p in c.components)


def test_cusp_with_triple_critical_point_is_rejected():
    # (T^3, T^4): squared speed 9T^4 + 16T^6 has a fourfold root at 0
    cusp = Curve.from_coefficients([[0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0, 1.0]])
    with pytest.raises(VanishingSpeedError):
        condition_number(cusp)


def test_weighted_coeff_norm_and_condition_examples(parabola, twisted):
    data = condition_number(parabola)
    assert weighted_coeff_norm(parabola) == 3.0
    assert data.min_speed == pytest.approx(1.0, abs=1e-12)
    assert data.condition == pytest.approx(3.0, rel=1e-12)
    assert weighted_coeff_norm(twisted) == 15.0


def test_speed_squared_matches_component_derivatives():
    rng = np.random.Generator(np.random.Philox(31))
    grid = np.linspace(-1.0, 1.0, 41)
    for _ in range(100):
        c = random_gaussian_curve(int(rng.integers(1, 12)), int(rng.integers(1, 6)), rng)
        expected = sum(npoly.polyval(grid, npoly.polyder(p.as_array())) ** 2 for p in c.components)
        values = eval_poly(speed_squared(c), grid)
        scale = 1e-10 * max(1.0, float(expected.max()))
        np.testing.assert_allclose(values, expected, rtol=1e-10, atol=scale)
        assert np.all(values >= -scale)


def test_min_speed_ignores_permutation_and_sign_flips(twisted):
    rng = np.random.Generator(np.random.Philox(32))
    for c in (twisted, random_gaussian_curve(6, 4, rng)):
        base = condition_number(c)
        rows = [list(p.coeffs) for p in c.components]
        flipped = Curve.from_coefficients([[-a for a in row] for row in reversed(rows)])
        moved = condition_number(flipped)
        assert moved.min_speed == pytest.approx(base.min_speed, rel=1e-12)
        assert moved.coeff_norm == pytest.approx(base.coeff_norm, rel=1e-15)


def test_rescale_to_unit_preserves_arc_length():
    c = Curve.from_coefficients([[1.0, 2.0, -1.0], [0.5, 0.0, 0.0, 2.0]], domain=(0.0, 3.0))
    assert arc_length(rescale_to_unit(c)) == pytest.approx(arc_length(c), rel=1e-10)
