import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import trapezoid

from chebyshev import ChebSeries
from curve_algebra import arc_length, condition_number, derivative, eval_poly, random_gaussian_curve, speed_squared
from errors import VanishingSpeedError
from sampler import RandomSource, build_plan, draw_parameters
from validation import (
    binned_tv,
    build_report,
    check_certificates,
    exact_density,
    ks_statistic,
    l1_density_error,
    piece_errors,
    reference_cdf,
    reference_cdf_many,
)


def test_reference_cdf_line(line):
    assert reference_cdf(line, 0.0) == pytest.approx(0.5, abs=1e-14)
    assert reference_cdf(line, -1.0) == 0.0
    assert reference_cdf(line, 3.0) == 1.0
    assert reference_cdf(line, -3.0) == 0.0


def test_reference_cdf_parabola_closed_form(parabola):
    def primitive(t):
        return t * math.sqrt(1 + 4 * t * t) / 2 + math.asinh(2 * t) / 4

    total = primitive(1.0) - primitive(-1.0)
    for t in (-0.7, 0.1, 0.9):
        assert reference_cdf(parabola, t) == pytest.approx((primitive(t) - primitive(-1.0)) / total, abs=1e-11)


def test_reference_cdf_many_matches_scalar(twisted):
    ts = np.array([-1.0, -0.6, -0.05, 0.0, 0.33, 0.8, 1.0])
    expected = [reference_cdf(twisted, t) for t in ts]
    np.testing.assert_allclose(reference_cdf_many(twisted, ts), expected, atol=1e-11)


def test_exact_density_integrates_to_one(parabola):
    grid = np.linspace(-1.0, 1.0, 20001)
    assert trapezoid(exact_density(parabola, grid), grid) == pytest.approx(1.0, abs=1e-6)


def test_binned_tv_of_quantiles(line):
    samples = (np.arange(10240) + 0.5) / 10240 * 2.0 - 1.0
    assert binned_tv(samples, line, 64) < 1e-3


def test_binned_tv_of_point_mass(line):
    assert binned_tv(np.full(100, -0.999), line, 4) == pytest.approx(0.75, abs=1e-12)


def test_ks_statistic(line):
    assert ks_statistic(np.full(50, -1.0), line) == pytest.approx(1.0)
    samples = (np.arange(1000) + 0.5) / 1000 * 2.0 - 1.0
    assert ks_statistic(samples, line) <= 0.0005 + 1e-12


@pytest.mark.parametrize("ell", [4, 7, 10])
def test_l1_density_error_within_half_budget(parabola, twisted, ell):
    for curve in (parabola, twisted):
        plan = build_plan(curve, ell)
        assert l1_density_error(plan, curve) <= 2.0 ** (-(1 + ell))


def test_piece_errors(parabola):
    plan = build_plan(parabola, 7, 4, split_at_roots=False)
    errors = piece_errors(plan, parabola)
    assert [e.interval for e in errors] == [p.interval for p in plan.pieces]
    assert all(e.l1 >= 0.0 and e.sup >= 0.0 for e in errors)
    assert math.fsum(e.l1 for e in errors) == pytest.approx(l1_density_error(plan, parabola))


def test_certificates_pass_on_built_plans(parabola, twisted):
    for curve in (parabola, twisted):
        for split_at_roots in (True, False):
            results = check_certificates(build_plan(curve, 5, split_at_roots=split_at_roots), curve)
            assert {r.name for r in results} == {"l1_density", "bisection", "rho_lower_bound", "cdf_monotone"}
            assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_certificates_catch_corrupted_density(parabola, caplog):
    plan = build_plan(parabola, 4, split_at_roots=False)
    piece = plan.pieces[0]
    bad = replace(plan, pieces=(replace(piece, density=ChebSeries(piece.density.coeffs * 1.5)),))
    results = check_certificates(bad, parabola)
    failed = {r.name for r in results if not r.passed}
    assert "l1_density" in failed
    assert "cdf_monotone" not in failed
    assert "l1_density" in caplog.text


def test_build_report(line):
    plan = build_plan(line, 4)
    samples = draw_parameters(plan, RandomSource(8), 100_000)
    report = build_report(plan, line, samples, 64)
    assert report.sample_count == 100_000
    assert report.bins == 64
    assert report.budget == 2.0**-4
    assert report.binned_tv < 0.03
    assert report.tightness == report.binned_tv / report.budget
    assert report.l1_density_error < 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("name", ["parabola", "twisted"])
def test_binned_tv_at_one_million_samples(name, request):
    curve = request.getfixturevalue(name)
    plan = build_plan(curve, 4)
    n, bins = 1_000_000, 256
    samples = draw_parameters(plan, RandomSource(2024), n)
    assert binned_tv(samples, curve, bins) <= 2.0**-4 + 3.0 * math.sqrt(bins / (4.0 * n))


@pytest.mark.slow
def test_line_samples_are_uniform(line):
    plan = build_plan(line, 4)
    samples = draw_parameters(plan, RandomSource(99), 1_000_000)
    assert ks_statistic(samples, line) <= 0.002


def test_reference_cdf_symmetric_parabola(parabola):
    assert reference_cdf(parabola, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert reference_cdf(parabola, 1.0) == 1.0


def test_reference_cdf_many_is_monotone(twisted):
    values = reference_cdf_many(twisted, np.linspace(-1.0, 1.0, 1000))
    assert np.all(np.diff(values) >= 0.0)
    assert values[-1] == pytest.approx(1.0, abs=1e-10)
    assert values[0] == 0.0


def test_binned_tv_examples(line):
    assert binned_tv(np.array([0.3]), line, 2) == pytest.approx(0.5, abs=1e-12)
    assert binned_tv(np.array([-0.5, 0.5]), line, 2) == pytest.approx(0.0, abs=1e-12)


def test_ks_single_median_sample(line):
    assert ks_statistic(np.array([0.0]), line) == pytest.approx(0.5)


def test_binned_tv_below_l1_plus_noise(parabola):
    plan = build_plan(parabola, 4, split_at_roots=False)
    n, bins = 200_000, 64
    samples = draw_parameters(plan, RandomSource(4), n)
    slack = 3.0 * math.sqrt(bins / (4.0 * n))
    assert binned_tv(samples, parabola, bins) <= l1_density_error(plan, parabola) + slack


def test_piece_l1_bounded_by_length_times_sup(parabola):
    plan = build_plan(parabola, 7, 4, split_at_roots=False)
    for e in piece_errors(plan, parabola):
        a, b = e.interval
        assert e.l1 <= (b - a) * e.sup * 1.01 + 1e-9


def test_density_slope_bounded_by_condition():
    rng = np.random.Generator(np.random.Philox(50))
    grid = np.linspace(-1.0, 1.0, 2001)
    checked = 0
    while checked < 50:
        curve = random_gaussian_curve(int(rng.integers(2, 9)), int(rng.integers(2, 6)), rng)
        try:
            data = condition_number(curve)
        except VanishingSpeedError:
            continue
        sq = speed_squared(curve)
        slope = eval_poly(derivative(sq), grid) / (2.0 * np.sqrt(eval_poly(sq, grid)) * arc_length(curve))
        assert np.max(np.abs(slope)) <= curve.degree * data.condition
        checked += 1


def test_certificates_catch_shallow_bisection(parabola):
    plan = build_plan(parabola, 7, split_at_roots=False)
    piece = plan.pieces[0]
    bad = replace(plan, pieces=(replace(piece, bisect_depth=piece.bisect_depth - 5),))
    failed = {r.name for r in check_certificates(bad, parabola) if not r.passed}
    assert failed == {"bisection"}


def test_line_plan_passes_all_certificates(line):
    assert all(r.passed for r in check_certificates(build_plan(line, 4), line))


def test_rho_certificate_uses_stored_piece_bound(parabola):
    plan = build_plan(parabola, 4)
    results = [r for r in check_certificates(plan, parabola) if r.name == "rho_lower_bound"]
    assert [r.bound for r in results] == [p.report.lower_bound for p in plan.pieces]

    piece = plan.pieces[0]
    raised = replace(piece.report, lower_bound=piece.report.rho_star + 1.0)
    bad = replace(plan, pieces=(replace(piece, report=raised), *plan.pieces[1:]))
    failed = {(r.name, r.piece) for r in check_certificates(bad, parabola) if not r.passed}
    assert failed == {("rho_lower_bound", 0)}
