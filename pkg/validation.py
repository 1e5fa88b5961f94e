"""Independent checks of a plan against the exact arc-length density.

The oracle integrates the exact speed with QUADPACK; the estimators compare
samples against it (binned TV, KS) and the plan's density against the exact
density (L1). check_certificates itemises the analytic guarantees.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import stats
from scipy.integrate import IntegrationWarning, quad

from chebyshev import check_grid, clenshaw_eval, derivative_series, sup_norm_estimate
from config import (
    CHECK_GRID_FACTOR,
    GAUSS_POINTS,
    MONOTONE_TOLERANCE,
    QUAD_EPSABS,
    QUAD_EPSREL,
    QUAD_LIMIT,
    REFERENCE_PANELS,
)
from curve_algebra import Curve, arc_length, speed_squared
from sampler import SamplerPlan

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TVReport:
    l1_density_error: float
    binned_tv: float
    ks_stat: float
    budget: float
    sample_count: int
    bins: int

    @property
    def tightness(self) -> float:
        return self.binned_tv / self.budget


@dataclass(frozen=True)
class CertificateResult:
    name: str
    passed: bool
    value: float
    bound: float
    piece: int | None = None


@dataclass(frozen=True)
class PieceError:
    interval: tuple[float, float]
    l1: float
    sup: float


# --- Exact density ---


def _speed_fn(c: Curve):
    sq = speed_squared(c).as_array()

    def speed(s):
        return np.sqrt(np.maximum(npoly.polyval(s, sq), 0.0))

    return speed


def _quad(f, a: float, b: float, points=None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, _ = quad(f, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, points=points)
    return value


def reference_cdf(c: Curve, t: float) -> float:
    """Fraction of arc length on [-1, t]."""
    speed = _speed_fn(c)
    t = min(max(float(t), -1.0), 1.0)
    if t == -1.0:
        return 0.0
    if t == 1.0:
        return 1.0
    return _quad(speed, -1.0, t) / arc_length(c)


def reference_cdf_many(c: Curve, ts) -> np.ndarray:
    """Vectorised reference_cdf: Gauss-Legendre panels between the sorted query points and a fixed grid."""
    speed = _speed_fn(c)
    ts = np.clip(np.asarray(ts, dtype=float), -1.0, 1.0)
    edges = np.union1d(np.linspace(-1.0, 1.0, REFERENCE_PANELS + 1), ts)

    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    left, right = edges[:-1], edges[1:]
    half = (right - left) / 2.0
    points = (left + right)[:, None] / 2.0 + half[:, None] * nodes[None, :]
    panels = half * (speed(points) @ weights)

    cumulative = np.concatenate([[0.0], np.cumsum(panels)])
    cumulative /= cumulative[-1]
    return cumulative[np.searchsorted(edges, ts)]


def exact_density(c: Curve, t):
    return _speed_fn(c)(t) / arc_length(c)


# --- Sample estimators ---


def binned_tv(samples, c: Curve, bins: int) -> float:
    """Half the L1 distance between empirical and exact bin masses on equal-width bins."""
    samples = np.asarray(samples, dtype=float)
    edges = np.linspace(-1.0, 1.0, bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    empirical = counts / samples.size
    expected = np.diff(reference_cdf_many(c, edges))
    return float(0.5 * np.sum(np.abs(empirical - expected)))


def ks_statistic(samples, c: Curve) -> float:
    samples = np.asarray(samples, dtype=float)
    return float(stats.kstest(samples, lambda x: reference_cdf_many(c, x)).statistic)


# --- Density errors ---


def _piece_density(plan: SamplerPlan, i: int):
    piece = plan.pieces[i]

    def density(t):
        return piece.probability * clenshaw_eval(piece.density, piece.to_local(t)) / piece.half_width

    return density


def l1_density_error(plan: SamplerPlan, c: Curve) -> float:
    """Integral over [-1, 1] of |composite plan density - exact density|."""
    return math.fsum(e.l1 for e in piece_errors(plan, c))


def piece_errors(plan: SamplerPlan, c: Curve) -> list[PieceError]:
    """Per piece: L1 error and grid sup error of the composite density."""
    length = arc_length(c)
    speed = _speed_fn(c)
    errors = []
    for i, piece in enumerate(plan.pieces):
        density = _piece_density(plan, i)
        a, b = piece.interval

        def gap(t, density=density):
            return abs(density(t) - speed(t) / length)

        l1 = _quad(gap, a, b)
        grid = piece.to_global(check_grid(piece.density, CHECK_GRID_FACTOR))
        sup = float(np.max(np.abs(density(grid) - speed(grid) / length)))
        errors.append(PieceError(interval=piece.interval, l1=l1, sup=sup))
    return errors


# --- Certificates ---


def check_certificates(plan: SamplerPlan, c: Curve) -> list[CertificateResult]:
    half_budget = 2.0 ** (-(1 + plan.ell))
    l1 = l1_density_error(plan, c)
    results = [CertificateResult("l1_density", l1 <= half_budget, l1, half_budget)]

    for i, piece in enumerate(plan.pieces):
        slope = sup_norm_estimate(derivative_series(piece.density)).grid
        bisection = 2.0 ** (1 - piece.bisect_depth) * slope
        results.append(CertificateResult("bisection", bisection <= half_budget, bisection, half_budget, i))

        report = piece.report
        lower = report.lower_bound
        results.append(CertificateResult("rho_lower_bound", report.rho_star >= lower, report.rho_star, lower, i))

        grid = check_grid(piece.cdf, CHECK_GRID_FACTOR)
        steps = np.diff(clenshaw_eval(piece.cdf, grid))
        worst = float(steps.min()) if steps.size else 0.0
        results.append(CertificateResult("cdf_monotone", worst >= -MONOTONE_TOLERANCE, worst, -MONOTONE_TOLERANCE, i))

    for r in results:
        if not r.passed:
            logger.warning("certificate %s failed on piece %s: %.6g vs %.6g", r.name, r.piece, r.value, r.bound)
    return results


def build_report(plan: SamplerPlan, c: Curve, samples, bins: int) -> TVReport:
    samples = np.asarray(samples, dtype=float)
    report = TVReport(
        l1_density_error=l1_density_error(plan, c),
        binned_tv=binned_tv(samples, c, bins),
        ks_stat=ks_statistic(samples, c),
        budget=plan.budget,
        sample_count=int(samples.size),
        bins=bins,
    )
    logger.info("binned TV / budget = %.4g", report.tightness)
    return report
