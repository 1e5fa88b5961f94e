"""Polynomial and curve arithmetic in the monomial basis.

Coefficients are stored in ascending degree order (a0, a1, ..., am), the
order numpy.polynomial.polynomial uses, so Horner evaluation, products and
sums are delegated to numpy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import quad

from config import CHECK_GRID_FACTOR, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT, TRIM_TOLERANCE, VANISHING_SPEED_RATIO
from errors import EmptyDomainError, VanishingSpeedError

# --- Types ---


@dataclass(frozen=True)
class Poly:
    """Real polynomial, canonical: no trailing zero unless it is the zero polynomial."""

    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        values = [float(a) for a in self.coeffs] or [0.0]
        while len(values) > 1 and abs(values[-1]) <= TRIM_TOLERANCE:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0.0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def __call__(self, z):
        return eval_poly(self, z)


@dataclass(frozen=True)
class Curve:
    components: tuple[Poly, ...]
    domain: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("A curve needs at least one component.")
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))

    @classmethod
    def from_coefficients(cls, components: Sequence[Sequence[float]], domain=(-1.0, 1.0)) -> "Curve":
        return cls(tuple(Poly(tuple(c)) for c in components), tuple(domain))

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.components)

    @property
    def is_canonical(self) -> bool:
        return self.domain == (-1.0, 1.0)


@dataclass(frozen=True)
class ConditionData:
    coeff_norm: float
    min_speed: float
    condition: float


# --- Polynomial operations ---


def eval_poly(p: Poly, z):
    """Horner evaluation; real input gives real output, arrays are mapped elementwise."""
    value = npoly.polyval(z, p.as_array())
    if np.ndim(value) == 0:
        return complex(value) if isinstance(value, (complex, np.complexfloating)) else float(value)
    return value


def derivative(p: Poly) -> Poly:
    if p.degree == 0:
        return Poly((0.0,))
    return Poly(tuple(j * a for j, a in enumerate(p.coeffs) if j > 0))


def poly_add(p: Poly, q: Poly) -> Poly:
    return Poly(tuple(npoly.polyadd(p.as_array(), q.as_array())))


def poly_mul(p: Poly, q: Poly) -> Poly:
    return Poly(tuple(npoly.polymul(p.as_array(), q.as_array())))


def coefficient_norm(p: Poly) -> float:
    return math.fsum(abs(a) for a in p.coeffs)


# --- Curve operations ---


def speed_squared(c: Curve) -> Poly:
    """Sum of the squared component derivatives, the polynomial whose root is the speed."""
    total = Poly((0.0,))
    for component in c.components:
        d = derivative(component)
        total = poly_add(total, poly_mul(d, d))
    return total


def weighted_coeff_norm(c: Curve) -> float:
    return math.fsum(j * abs(a) for p in c.components for j, a in enumerate(p.coeffs))


def speed(c: Curve, t):
    """Euclidean norm of the derivative at t (scalar or array)."""
    return np.sqrt(np.maximum(eval_poly(speed_squared(c), t), 0.0))


def condition_number(c: Curve) -> ConditionData:
    from analyticity import critical_points

    coeff_norm = weighted_coeff_norm(c)
    sq = speed_squared(c)

    grid = np.linspace(-1.0, 1.0, CHECK_GRID_FACTOR * (sq.degree + 1))
    candidates = [-1.0, 1.0, *critical_points(sq), *grid]
    values = np.maximum(eval_poly(sq, np.asarray(candidates)), 0.0)
    min_speed = float(np.sqrt(values.min()))

    if coeff_norm == 0.0 or min_speed <= VANISHING_SPEED_RATIO * coeff_norm:
        at = candidates[int(np.argmin(values))]
        raise VanishingSpeedError(
            f"Speed {min_speed:.3g} at t = {at:.6g} is below tolerance for coefficient norm {coeff_norm:.6g}."
        )
    return ConditionData(coeff_norm=coeff_norm, min_speed=min_speed, condition=coeff_norm / min_speed)


def rescale_to_unit(c: Curve) -> Curve:
    """Compose every component with s = a + (b - a)(t + 1)/2 so the domain becomes [-1, 1]."""
    a, b = c.domain
    if not a < b:
        raise EmptyDomainError(f"Domain [{a}, {b}] is empty.")
    if c.is_canonical:
        return c

    alpha = (a + b) / 2.0
    beta = (b - a) / 2.0
    components = []
    for p in c.components:
        m = p.degree
        coeffs = []
        for power in range(m + 1):
            terms = [
                a_j * math.comb(j, power) * alpha ** (j - power) * beta**power
                for j, a_j in enumerate(p.coeffs)
                if j >= power
            ]
            coeffs.append(math.fsum(terms))
        components.append(Poly(tuple(coeffs)))
    return Curve(tuple(components), (-1.0, 1.0))


def restrict(c: Curve, interval: tuple[float, float]) -> Curve:
    """The piece of a canonical curve over a subinterval, rescaled to its own [-1, 1]."""
    return rescale_to_unit(Curve(c.components, interval))


def evaluate_curve(c: Curve, t) -> np.ndarray:
    """Points gamma(t); shape (n,) for scalar t, (len(t), n) for arrays."""
    t = np.asarray(t, dtype=float)
    columns = [npoly.polyval(t, p.as_array()) for p in c.components]
    return np.stack(columns, axis=-1)


def arc_length(c: Curve) -> float:
    sq = speed_squared(c).as_array()
    a, b = c.domain
    value, _ = quad(
        lambda s: math.sqrt(max(npoly.polyval(s, sq), 0.0)),
        a,
        b,
        epsabs=QUAD_EPSABS,
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    return value


# --- Curve families used by the experiments ---


def random_gaussian_curve(degree: int, dimension: int, rng: np.random.Generator) -> Curve:
    """Components with i.i.d. standard Gaussian coefficients."""
    coeffs = rng.standard_normal((dimension, degree + 1))
    return Curve.from_coefficients(coeffs.tolist())


def geometric_curve(degree: int, dimension: int = 3) -> Curve:
    """(1 + T + ... + T^d) repeated in every coordinate."""
    return Curve.from_coefficients([[1.0] * (degree + 1)] * dimension)
