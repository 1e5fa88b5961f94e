"""Offline plan construction and online drawing.

build_plan does all the expensive work once: it splits [-1, 1], fits a
Chebyshev density and CDF per piece and fixes the bisection depth. Drawing
only evaluates the stored CDF series, so a plan can be shared by any number
of workers as long as each owns its RandomSource.

Every draw consumes exactly three uniforms: piece choice, bisection target,
final position inside the bracket. The batched path consumes them in the
same order, which keeps it bit-identical to repeated scalar draws.
"""
from __future__ import annotations

import bisect
import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from analyticity import AnalyticityReport, analyze, complex_roots, rho_star
from chebyshev import (
    ChebSeries,
    antiderivative,
    check_grid,
    clenshaw_eval,
    definite_integral,
    derivative_series,
    interpolate,
    sup_norm_estimate,
)
from config import (
    CHECK_GRID_FACTOR,
    MAX_DOUBLINGS,
    MONOTONE_TOLERANCE,
    PLAN_TOLERANCE,
    POSITIVITY_TOLERANCE,
    SHARDS_PER_WORKER,
    SHARD_SIZE,
    SPLIT_DEDUP_TOLERANCE,
)
from curve_algebra import Curve, condition_number, evaluate_curve, rescale_to_unit, restrict, speed_squared
from errors import PositivityFailureError

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


# --- Random sources ---


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def shard_seed(seed: int, index: int) -> int:
    return splitmix64((seed ^ index) & MASK64)


def resolve_seed(seed: int) -> int:
    """Seed 0 means fresh OS entropy; the drawn seed is logged so the run can be repeated."""
    if seed != 0:
        return seed & MASK64
    drawn = int(np.random.SeedSequence().entropy) & MASK64
    logger.info("seed 0 requested, using entropy seed %d", drawn)
    return drawn


class RandomSource:
    """Uniforms on [0, 1) from numpy's counter-based Philox generator."""

    def __init__(self, seed: int):
        self.seed = seed
        self._gen = np.random.Generator(np.random.Philox(seed))

    def next_unit(self) -> float:
        return float(self._gen.random())

    def next_units(self, n: int) -> np.ndarray:
        return self._gen.random(n)


class FeedSource:
    """Replays a fixed stream of uniforms."""

    def __init__(self, values: Sequence[float]):
        self._values = [float(v) for v in values]
        self._position = 0

    def next_unit(self) -> float:
        if self._position >= len(self._values):
            raise IndexError("Feed exhausted.")
        value = self._values[self._position]
        self._position += 1
        return value

    def next_units(self, n: int) -> np.ndarray:
        return np.asarray([self.next_unit() for _ in range(n)])


# --- Plan types ---


@dataclass(frozen=True)
class PlanPiece:
    interval: tuple[float, float]
    density: ChebSeries
    cdf: ChebSeries
    probability: float
    bisect_depth: int
    report: AnalyticityReport

    @property
    def midpoint(self) -> float:
        return (self.interval[0] + self.interval[1]) / 2.0

    @property
    def half_width(self) -> float:
        return (self.interval[1] - self.interval[0]) / 2.0

    def to_global(self, s):
        return self.midpoint + self.half_width * s

    def to_local(self, t):
        return (t - self.midpoint) / self.half_width


@dataclass(frozen=True)
class SamplerPlan:
    curve: Curve
    pieces: tuple[PlanPiece, ...]
    ell: int
    splits: int = 0
    split_at_roots: bool = True
    bound: str = "search"
    cumulative: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))
        cum = np.cumsum([p.probability for p in self.pieces])
        if abs(cum[-1] - 1.0) > PLAN_TOLERANCE:
            raise ValueError(f"Piece probabilities sum to {cum[-1]:.17g}, not 1.")
        # rounding only
        cum[-1] = 1.0
        object.__setattr__(self, "cumulative", tuple(float(x) for x in cum))

    @property
    def max_degree(self) -> int:
        return max(p.density.degree for p in self.pieces)

    @property
    def budget(self) -> float:
        return 2.0 ** (-self.ell)


# --- Plan construction ---


def split_points(roots, splits: int) -> list[float]:
    """Interior breakpoints: real parts of roots inside (-1, 1) plus splits-1 uniform points."""
    if splits < 0:
        raise ValueError(f"splits must be >= 0, got {splits}.")
    candidates = [z.real for z in roots if -1.0 < z.real < 1.0]
    if splits > 0:
        candidates.extend(-1.0 + 2.0 * j / splits for j in range(1, splits))

    points: list[float] = []
    for x in sorted(candidates):
        if abs(x) >= 1.0 - SPLIT_DEDUP_TOLERANCE:
            continue
        if points and x - points[-1] <= SPLIT_DEDUP_TOLERANCE:
            continue
        points.append(x)
    return points


def bisect_depth(density: ChebSeries, ell: int) -> int:
    """Bisection steps so that 2^(1 - depth) sup|density'| <= 2^-(1+ell) on the local [-1, 1]."""
    slope = sup_norm_estimate(derivative_series(density)).grid
    extra = max(0, math.ceil(math.log2(slope))) if slope > 0 else 0
    return 2 + ell + extra


def _passes_checks(density: ChebSeries, cdf: ChebSeries) -> bool:
    grid = check_grid(density, CHECK_GRID_FACTOR)
    if np.min(clenshaw_eval(density, grid)) < -POSITIVITY_TOLERANCE:
        return False
    return bool(np.all(np.diff(clenshaw_eval(cdf, grid)) >= -MONOTONE_TOLERANCE))


def _build_piece(c: Curve, interval: tuple[float, float], ell: int, bound: str) -> tuple[PlanPiece, float]:
    local = restrict(c, interval)
    report = analyze(local, ell, bound)
    sq = speed_squared(local).as_array()

    def local_speed(x):
        return np.sqrt(np.maximum(npoly.polyval(x, sq), 0.0))

    k = report.degree
    for attempt in range(MAX_DOUBLINGS + 1):
        raw = interpolate(local_speed, k)
        mass = definite_integral(raw)
        density = raw.scaled(1.0 / mass)
        cdf = antiderivative(density)
        if _passes_checks(density, cdf):
            break
        logger.info("piece %s: interpolant of degree %d dips negative, doubling", interval, k)
        k *= 2
    else:
        raise PositivityFailureError(
            f"Density on piece {interval} stays negative after {MAX_DOUBLINGS} degree doublings (k = {k // 2})."
        )

    depth = bisect_depth(density, ell)
    report = replace(report, degree=k)
    logger.info(
        "piece [%.6g, %.6g]: k=%d (heuristic k=%d) rho*=%.6g M=%.6g depth=%d",
        interval[0],
        interval[1],
        k,
        report.heuristic_degree,
        report.rho_star,
        report.ellipse_sup,
        depth,
    )
    piece = PlanPiece(interval=interval, density=density, cdf=cdf, probability=mass, bisect_depth=depth, report=report)
    return piece, mass


def build_plan(c: Curve, ell: int, splits: int = 0, *, split_at_roots: bool = True, bound: str = "search") -> SamplerPlan:
    """Offline part: partition [-1, 1], then fit density, CDF and depth on every piece."""
    c = rescale_to_unit(c)
    condition_number(c)
    sq = speed_squared(c)
    roots = complex_roots(sq) if sq.degree > 0 else []
    rho_star(roots)

    breaks = split_points(roots if split_at_roots else [], splits)
    edges = [-1.0, *breaks, 1.0]
    built = [_build_piece(c, (a, b), ell, bound) for a, b in zip(edges[:-1], edges[1:])]

    total = math.fsum(mass for _, mass in built)
    pieces = [replace(piece, probability=mass / total) for piece, mass in built]
    return SamplerPlan(curve=c, pieces=tuple(pieces), ell=ell, splits=splits, split_at_roots=split_at_roots, bound=bound)


# --- Online drawing ---


def bisection_draw(piece: PlanPiece, rng) -> float:
    """Bisect the CDF toward u for bisect_depth steps, then draw uniformly in the bracket."""
    u = rng.next_unit()
    xl, xr = -1.0, 1.0
    for _ in range(piece.bisect_depth):
        xm = 0.5 * (xl + xr)
        # equality counts as left of the target
        if u - clenshaw_eval(piece.cdf, xm) >= 0.0:
            xl = xm
        else:
            xr = xm
    return xl + rng.next_unit() * (xr - xl)


def _bisection_batch(piece: PlanPiece, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    xl = np.full(u.shape, -1.0)
    xr = np.full(u.shape, 1.0)
    for _ in range(piece.bisect_depth):
        xm = 0.5 * (xl + xr)
        right = u - clenshaw_eval(piece.cdf, xm) >= 0.0
        xl = np.where(right, xm, xl)
        xr = np.where(right, xr, xm)
    return xl + v * (xr - xl)


def select_piece(plan: SamplerPlan, u: float) -> int:
    return min(bisect.bisect_left(plan.cumulative, u), len(plan.pieces) - 1)


def draw_parameter(plan: SamplerPlan, rng) -> float:
    piece = plan.pieces[select_piece(plan, rng.next_unit())]
    return piece.to_global(bisection_draw(piece, rng))


def sample_point(plan: SamplerPlan, rng) -> np.ndarray:
    return evaluate_curve(plan.curve, draw_parameter(plan, rng))


def draw_parameters(plan: SamplerPlan, rng, n: int) -> np.ndarray:
    """n draws at once; same values as n calls of draw_parameter on the same stream."""
    u = rng.next_units(3 * n).reshape(n, 3)
    index = np.minimum(np.searchsorted(np.asarray(plan.cumulative), u[:, 0], side="left"), len(plan.pieces) - 1)
    out = np.empty(n)
    for i, piece in enumerate(plan.pieces):
        mask = index == i
        if np.any(mask):
            out[mask] = piece.to_global(_bisection_batch(piece, u[mask, 1], u[mask, 2]))
    return out


def sample_points(plan: SamplerPlan, rng, n: int) -> tuple[np.ndarray, np.ndarray]:
    t = draw_parameters(plan, rng, n)
    return t, evaluate_curve(plan.curve, t)


def sample_sharded(plan: SamplerPlan, seed: int, count: int, workers: int = 1) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Fixed-size shards, shard i seeded by splitmix64(seed ^ i), yielded in shard order."""
    shards = math.ceil(count / SHARD_SIZE)

    def run_shard(i: int):
        n = min(SHARD_SIZE, count - i * SHARD_SIZE)
        return sample_points(plan, RandomSource(shard_seed(seed, i)), n)

    if workers <= 1:
        for i in range(shards):
            yield run_shard(i)
        return
    # at most SHARDS_PER_WORKER * workers finished shards wait for the consumer
    window = SHARDS_PER_WORKER * workers
    with ThreadPoolExecutor(max_workers=workers) as pool:
        pending: deque = deque()
        submitted = 0
        while pending or submitted < shards:
            while submitted < shards and len(pending) < window:
                pending.append(pool.submit(run_shard, submitted))
                submitted += 1
            yield pending.popleft().result()
