"""Roots of the squared speed, the Bernstein ellipse parameter rho*, the
ellipse bound M and the interpolant degree k."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.cluster.hierarchy import fclusterdata
from scipy.optimize import minimize_scalar

from config import (
    ABERTH_MAX_ITER,
    ABERTH_TOL,
    BOUND_MODES,
    CLUSTER_NEWTON_STEPS,
    ELLIPSE_GRID,
    ELLIPSE_MARGIN,
    ELLIPSE_ROOT_FLOOR,
    ELLIPSE_XTOL,
    K_MIN,
    REAL_ROOT_SLACK,
    ROOT_CLUSTER_RADIUS,
    ROOT_ON_INTERVAL_TOLERANCE,
    ROOT_RESIDUAL_FACTOR,
)
from curve_algebra import Curve, Poly, arc_length, coefficient_norm, condition_number, derivative, speed_squared
from errors import NoConvergenceError, RootInsideError, RootOnIntervalError, ZeroPolynomialError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnalyticityReport:
    roots: tuple[complex, ...]
    rho_star: float
    ellipse_sup: float
    degree: int
    normalizer: float
    heuristic_degree: int
    condition: float
    lower_bound: float


# --- Roots ---


def _residuals_ok(p: np.ndarray, z: np.ndarray, factor: float = ROOT_RESIDUAL_FACTOR) -> bool:
    with np.errstate(over="ignore"):
        scale = factor * float(np.sum(np.abs(p))) * np.maximum(1.0, np.abs(z)) ** (p.size - 1)
        return bool(np.all(np.abs(npoly.polyval(z, p)) <= scale))


def _aberth_steps(monic: np.ndarray, z: np.ndarray, max_iter: int) -> tuple[np.ndarray, bool]:
    """Simultaneous Aberth-Ehrlich updates; stops three polishing steps after the residuals settle."""
    dmonic = npoly.polyder(monic)
    n = z.size
    polish = None
    for _ in range(max_iter):
        pv = npoly.polyval(z, monic)
        dpv = npoly.polyval(z, dmonic)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = pv / dpv
            diff = z[:, None] - z[None, :]
            diff[np.arange(n), np.arange(n)] = np.inf
            sums = np.sum(1.0 / diff, axis=1)
            delta = ratio / (1.0 - ratio * sums)
        z = z - np.where(np.isfinite(delta), delta, 0.0)
        if polish is None and _residuals_ok(monic, z, ABERTH_TOL):
            polish = 3
        if polish is not None:
            polish -= 1
            if polish == 0:
                return z, True
    return z, polish is not None


def _pair_conjugates(z: np.ndarray) -> list[complex]:
    tol = 1e-12
    upper = [w for w in z if w.imag > tol * max(1.0, abs(w))]
    lower = [w for w in z if w.imag < -tol * max(1.0, abs(w))]
    roots = [complex(w.real, 0.0) for w in z if abs(w.imag) <= tol * max(1.0, abs(w))]

    for u in upper:
        if not lower:
            roots.append(complex(u.real, 0.0))
            continue
        j = int(np.argmin([abs(u - w.conjugate()) for w in lower]))
        w = lower.pop(j)
        m = (u + w.conjugate()) / 2.0
        roots.extend([m, m.conjugate()])
    roots.extend(complex(w.real, 0.0) for w in lower)
    return sorted(roots, key=lambda w: (w.real, w.imag))


def complex_roots(p: Poly) -> list[complex]:
    """All roots with multiplicity, by Aberth-Ehrlich from a Cauchy-bound circle."""
    if p.is_zero:
        raise ZeroPolynomialError("The zero polynomial has no finite root set.")
    if p.degree == 0:
        return []

    a = p.as_array()
    monic = a / a[-1]
    n = p.degree
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    z0 = radius * np.exp(1j * angles)

    z, converged = _aberth_steps(monic, z0, ABERTH_MAX_ITER)
    if not (converged and _residuals_ok(a, z)):
        logger.warning("Aberth iteration did not settle for degree %d; polishing companion eigenvalues", n)
        z, _ = _aberth_steps(monic, npoly.polyroots(a).astype(complex), 20)
        if not _residuals_ok(a, z):
            raise NoConvergenceError(f"Root finder failed on a degree-{n} polynomial.")
    return _pair_conjugates(z)


def root_clusters(roots, radius: float = ROOT_CLUSTER_RADIUS) -> list[tuple[complex, int]]:
    """(mean, size) of every group of roots chained together within radius (single linkage)."""
    if len(roots) < 2:
        return [(complex(z), 1) for z in roots]
    z = np.asarray(roots, dtype=complex)
    labels = fclusterdata(np.column_stack([z.real, z.imag]), t=radius, criterion="distance", method="single")
    return [(complex(z[labels == label].mean()), int(np.sum(labels == label))) for label in np.unique(labels)]


def polish_multiple_root(q: np.ndarray, start: complex, size: int, radius: float = ROOT_CLUSTER_RADIUS) -> complex:
    """Newton on the (size - 1)-th derivative of q, where a size-fold root of q is simple."""
    r = npoly.polyder(q, size - 1)
    dr = npoly.polyder(r)
    z = start
    for _ in range(CLUSTER_NEWTON_STEPS):
        slope = npoly.polyval(z, dr)
        if slope == 0:
            break
        z = z - npoly.polyval(z, r) / slope
    # a cluster of distinct roots may send Newton elsewhere
    return z if abs(z - start) <= radius else start


def critical_points(p: Poly) -> list[float]:
    """Real critical points of p strictly inside (-1, 1).

    A multiple critical point comes back from the root finder as a ring, so
    every ring is also collapsed to one polished point.
    """
    if p.degree < 2:
        return []
    q = derivative(p)
    roots = complex_roots(q)
    candidates = list(roots)
    for centre, size in root_clusters(roots):
        if size > 1:
            candidates.append(polish_multiple_root(q.as_array(), centre, size))

    points = set()
    for z in candidates:
        if abs(z.imag) <= REAL_ROOT_SLACK * max(1.0, abs(z.real)) and -1.0 < z.real < 1.0:
            points.add(z.real)
    return sorted(points)


# --- Ellipse parameter ---


def _ellipse_parameter(z: complex) -> float:
    s = abs(z + 1) + abs(z - 1)
    return (s + math.sqrt(max(s * s - 4.0, 0.0))) / 2.0


def _distance_to_interval(z: complex) -> float:
    excess = max(abs(z.real) - 1.0, 0.0)
    return math.hypot(excess, z.imag)


def rho_star(roots) -> float:
    """Largest rho whose open ellipse E_rho is free of the given roots; inf for none."""
    best = math.inf
    for z in roots:
        if _distance_to_interval(z) < ROOT_ON_INTERVAL_TOLERANCE:
            raise RootOnIntervalError(f"Root {z} lies on the parameter interval; the speed vanishes there.")
        best = min(best, _ellipse_parameter(z))
    return best


def working_rho(rho: float) -> float:
    """The rho at which M is measured, strictly inside the critical ellipse."""
    if math.isinf(rho):
        return rho
    return 1.0 + (1.0 - ELLIPSE_MARGIN) * (rho - 1.0)


def ellipse_boundary(rho: float, theta):
    return (rho * np.exp(1j * theta) + np.exp(-1j * theta) / rho) / 2.0


def ellipse_sup(speed_sq: Poly, rho: float, normalizer: float) -> float:
    """Max of sqrt|speed_sq| / normalizer on the upper half of the boundary of E_rho."""
    coeffs = speed_sq.as_array()
    theta = np.linspace(0.0, np.pi, ELLIPSE_GRID)
    modulus = np.abs(npoly.polyval(ellipse_boundary(rho, theta), coeffs))
    floor = ELLIPSE_ROOT_FLOOR * coefficient_norm(speed_sq)
    if modulus.min() < floor:
        at = theta[int(np.argmin(modulus))]
        raise RootInsideError(f"Squared speed vanishes on the boundary of E_{rho:.6g} near theta = {at:.6g}.")

    values = np.sqrt(modulus) / normalizer
    best = int(np.argmax(values))
    lo = theta[max(best - 1, 0)]
    hi = theta[min(best + 1, theta.size - 1)]

    def negative(t: float) -> float:
        return -math.sqrt(abs(npoly.polyval(ellipse_boundary(rho, t), coeffs))) / normalizer

    refined = minimize_scalar(negative, bounds=(lo, hi), method="bounded", options={"xatol": ELLIPSE_XTOL})
    return max(float(values[best]), -float(refined.fun))


def interval_sup(speed_sq: Poly, normalizer: float) -> float:
    """Sup of sqrt(speed_sq) / normalizer on [-1, 1] over endpoints and critical points."""
    candidates = np.asarray([-1.0, 1.0, *critical_points(speed_sq)])
    values = np.maximum(npoly.polyval(candidates, speed_sq.as_array()), 0.0)
    return float(np.sqrt(values.max())) / normalizer


def bernstein_bound(speed_sq: Poly, rho: float, normalizer: float) -> float:
    """Conservative rho^d ||phi||_inf bound on the ellipse, d = deg(speed_sq)/2."""
    return rho ** (speed_sq.degree / 2.0) * interval_sup(speed_sq, normalizer)


def rho_lower_bound(d: int, condition: float) -> float:
    if math.isinf(condition):
        return 1.0
    return 1.0 + 1.0 / (math.e * d * condition)


# --- Degree selection ---


def interpolation_bound(M: float, rho: float, k: int) -> float:
    return 16.0 * M * rho ** (-k) / (rho - 1.0)


def choose_degree(ell: int, M: float, rho: float) -> int:
    """Smallest k >= K_MIN with 16 M rho^-k / (rho - 1) <= 2^-(1+ell)."""
    if math.isinf(rho):
        return K_MIN
    need = 5 + ell + math.log2(M) - math.log2(rho - 1.0)
    k = max(K_MIN, math.ceil(need / math.log2(rho)))
    while interpolation_bound(M, rho, k) > 2.0 ** (-(1 + ell)):
        k += 1
    return k


def heuristic_degree(ell: int, M: float, rho: float) -> int:
    """Uncertified count 5 + ell + ceil((log M - log(rho - 1)) / log rho), kept for comparison."""
    if math.isinf(rho):
        return K_MIN
    return 5 + ell + math.ceil((math.log2(M) - math.log2(rho - 1.0)) / math.log2(rho))


def analyze(c: Curve, ell: int, bound: str = "search") -> AnalyticityReport:
    """Roots, rho*, M and k for a canonical curve (one plan piece)."""
    if bound not in BOUND_MODES:
        raise ValueError(f"Unknown bound mode '{bound}'.")
    data = condition_number(c)
    sq = speed_squared(c)
    roots = complex_roots(sq)
    rho = rho_star(roots)
    normalizer = arc_length(c)

    if math.isinf(rho):
        M = interval_sup(sq, normalizer)
    elif bound == "bernstein":
        M = bernstein_bound(sq, rho, normalizer)
    else:
        M = ellipse_sup(sq, working_rho(rho), normalizer)

    rho_used = working_rho(rho)
    d = max(c.degree, 1)
    return AnalyticityReport(
        roots=tuple(roots),
        rho_star=rho,
        ellipse_sup=M,
        degree=choose_degree(ell, M, rho_used),
        normalizer=normalizer,
        heuristic_degree=heuristic_degree(ell, M, rho),
        condition=data.condition,
        lower_bound=rho_lower_bound(d, data.condition),
    )
