"""Chebyshev interpolation and series arithmetic on [-1, 1].

A series (c0, ..., ck) stands for c0/2 + sum_{a>=1} c_a T_a(x). Every routine
below uses that halved-c0 convention, so interpolation, integration and
differentiation compose without conversions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from config import SUP_OVERSAMPLING
from errors import NonfiniteSampleError


@dataclass(frozen=True, eq=False)
class ChebSeries:
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.coeffs, dtype=float).reshape(-1)
        if values.size == 0:
            values = np.zeros(1)
        values.setflags(write=False)
        object.__setattr__(self, "coeffs", values)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def scaled(self, factor: float) -> "ChebSeries":
        return ChebSeries(self.coeffs * factor)

    def __call__(self, x):
        return clenshaw_eval(self, x)


@dataclass(frozen=True)
class SupNorm:
    grid: float
    coefficient_bound: float


def cheb_nodes(k: int) -> np.ndarray:
    """The k zeros of T_k in decreasing order."""
    if k < 1:
        raise ValueError(f"Need at least one node, got k = {k}.")
    a = np.arange(k)
    nodes = np.cos((1 + 2 * a) * np.pi / (2 * k))
    # exact symmetry about 0
    nodes = (nodes - nodes[::-1]) / 2.0
    return nodes


def interpolate(f: Callable, k: int) -> ChebSeries:
    """Degree-k interpolant through the k+1 zeros of T_{k+1} (direct O(k^2) sum)."""
    nodes = cheb_nodes(k + 1)
    values = np.broadcast_to(np.asarray(f(nodes), dtype=float), nodes.shape)
    if not np.all(np.isfinite(values)):
        bad = nodes[~np.isfinite(values)][0]
        raise NonfiniteSampleError(f"Function value at node {bad:.17g} is not finite.")

    theta = (1 + 2 * np.arange(k + 1)) * np.pi / (2 * (k + 1))
    basis = np.cos(np.outer(np.arange(k + 1), theta))
    return ChebSeries(2.0 / (k + 1) * (basis @ values))


def clenshaw_eval(s: ChebSeries, x):
    """Backward recurrence b_a = 2x b_{a+1} - b_{a+2} + c_a; value is x b_1 - b_2 + c_0/2.

    Works on Python floats and numpy arrays with the same operation order, so
    scalar and batched evaluations agree bit for bit.
    """
    c = s.coeffs
    if isinstance(x, np.ndarray):
        b1 = np.zeros_like(x, dtype=float)
        b2 = np.zeros_like(x, dtype=float)
    else:
        x = float(x)
        b1 = 0.0
        b2 = 0.0
    two_x = 2.0 * x
    for a in range(c.size - 1, 0, -1):
        b1, b2 = two_x * b1 - b2 + float(c[a]), b1
    return x * b1 - b2 + float(c[0]) / 2.0


def antiderivative(s: ChebSeries) -> ChebSeries:
    """Primitive P with P(-1) = 0, so P(x) is the integral of s from -1 to x."""
    c = np.concatenate([s.coeffs, [0.0, 0.0]])
    k = s.degree
    out = np.zeros(k + 2)
    for a in range(1, k + 2):
        out[a] = (c[a - 1] - c[a + 1]) / (2.0 * a)
    signs = np.where(np.arange(k + 2) % 2 == 0, 1.0, -1.0)
    out[0] = -2.0 * math.fsum(out[1:] * signs[1:])
    return ChebSeries(out)


def definite_integral(s: ChebSeries) -> float:
    c = s.coeffs
    terms = [c[0]]
    for a in range(2, c.size, 2):
        terms.append(-2.0 * c[a] / (a * a - 1))
    return math.fsum(terms)


def derivative_series(s: ChebSeries) -> ChebSeries:
    """Exact derivative by d_{a-1} = d_{a+1} + 2a c_a."""
    c = s.coeffs
    k = s.degree
    if k == 0:
        return ChebSeries(np.zeros(1))
    d = np.zeros(k + 1)
    for a in range(k, 0, -1):
        d[a - 1] = (d[a + 1] if a + 1 <= k else 0.0) + 2.0 * a * c[a]
    return ChebSeries(d[:k])


def sup_norm_estimate(s: ChebSeries) -> SupNorm:
    """Grid maximum on 8(k+1)+1 Chebyshev extrema (includes +-1) and the |c| sum bound."""
    n = SUP_OVERSAMPLING * (s.degree + 1)
    grid = np.cos(np.pi * np.arange(n + 1) / n)
    grid_max = float(np.max(np.abs(clenshaw_eval(s, grid))))
    c = np.abs(s.coeffs)
    bound = math.fsum(c[1:]) + c[0] / 2.0
    return SupNorm(grid=grid_max, coefficient_bound=bound)


def check_grid(s: ChebSeries, factor: int) -> np.ndarray:
    """Uniform grid of factor*(k+1) points on [-1, 1], used by positivity and monotonicity checks."""
    return np.linspace(-1.0, 1.0, factor * (s.degree + 1))
