"""Highest-weight spherical kinematics.

The polar marginal of the maximal-projection spherical state is
P_m(theta) = sin^(2m+1)(theta) / I_(2m+1).  This module evaluates that
density, generic expectations under it, the cosecant expectation, the
vertical second moment, the Gaussian equatorial approximation, and a
reproducible inverse-CDF sampler used as a statistical oracle.

The azimuthal angle never appears: every quantity here is a functional of
the polar marginal alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import numerics
from .errors import DomainError, ResourceError

#: Number of grid points in the sampler's cumulative table.
SAMPLER_GRID_POINTS = 4096

#: Default cap on a single sampling request.
DEFAULT_SAMPLE_CAP = 10**8


def _check_m(m: int) -> int:
    if m < 0:
        raise DomainError(f"quantum index must be >= 0, got {m}")
    return int(m)


@dataclass(frozen=True)
class PolarDensity:
    """Normalized polar marginal for quantum index m.

    ``log_norm`` is -ln I_(2m+1), precomputed from the closed form so that
    density evaluation is a single exp.
    """

    m: int
    log_norm: float

    @classmethod
    def for_m(cls, m: int) -> "PolarDensity":
        m = _check_m(m)
        return cls(m=m, log_norm=-numerics.log_sine_integral(2 * m + 1))


@dataclass(frozen=True)
class SphereGeometry:
    """Fixed spherical radius (R for the rotor, R0 for the thin shell)."""

    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise DomainError(f"sphere radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class SampleBatch:
    """Reproducible polar-angle draws from P_m."""

    m: int
    seed: int
    thetas: np.ndarray = field(repr=False)


def density_at(d: PolarDensity, theta: float) -> float:
    """Evaluate P_m(theta); exact 0 at the poles.

    Works in the log domain, (2m+1) ln sin(theta) + log_norm, so large m
    underflows cleanly to 0 near the poles instead of raising.
    """
    if not 0.0 <= theta <= numerics.PI:
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    if theta == 0.0 or theta == numerics.PI:
        return 0.0  # exact pole limit; sin(pi) is only ~1e-16 in floats
    s = math.sin(theta)
    if s <= 0.0:
        return 0.0
    return math.exp((2 * d.m + 1) * math.log(s) + d.log_norm)


def expectation(m: int, f: Callable[[float], float], tol: float = 1e-12) -> float:
    """Quantum average of f(theta) under P_m, by adaptive quadrature.

    The weight sin^(2m+1) is evaluated in the log domain; the
    normalization I_(2m+1) comes from the closed form.
    """
    m = _check_m(m)
    exponent = 2 * m + 1

    def integrand(theta: float) -> float:
        s = math.sin(theta)
        if s <= 0.0:
            return 0.0
        return f(theta) * math.exp(exponent * math.log(s))

    result = numerics.integrate(integrand, 0.0, numerics.PI, rel_tol=tol, abs_tol=tol)
    return result.value * math.exp(-numerics.log_sine_integral(exponent))


def csc_expectation(m: int) -> float:
    """<csc theta> = I_(2m)/I_(2m+1), via closed forms; always >= 1."""
    m = _check_m(m)
    return math.exp(numerics.log_sine_integral(2 * m) - numerics.log_sine_integral(2 * m + 1))


def z_second_moment(m: int, g: SphereGeometry) -> float:
    """<z^2> = R^2 / (2m+3), exactly."""
    m = _check_m(m)
    return g.radius**2 / (2 * m + 3)


def angular_width(m: int) -> float:
    """Characteristic equatorial width (2m+1)^(-1/2)."""
    m = _check_m(m)
    return (2 * m + 1) ** -0.5


def gaussian_approx(m: int, x: float) -> float:
    """Gaussian equatorial approximation P_m(pi/2) exp(-(2m+1) x^2 / 2).

    ``x`` is the angular offset from the equator; only |x| <= pi/2 is
    meaningful for the underlying cosine expansion.
    """
    m = _check_m(m)
    if abs(x) > numerics.PI / 2:
        raise DomainError(f"|x| must be <= pi/2, got {x}")
    peak = density_at(PolarDensity.for_m(m), numerics.PI / 2)
    return peak * math.exp(-0.5 * (2 * m + 1) * x * x)


def alignment_ratio(m: int) -> float:
    """Angular-momentum alignment sqrt(m/(m+1)); increases to 1."""
    m = _check_m(m)
    return math.sqrt(m / (m + 1))


def _vector_density(m: int, theta: np.ndarray, log_norm: float) -> np.ndarray:
    """Vectorized P_m, log-domain, 0 where sin(theta) <= 0 or underflowing."""
    s = np.sin(theta)
    out = np.zeros_like(s)
    mask = s > 0.0
    logp = (2 * m + 1) * np.log(s[mask]) + log_norm
    out[mask] = np.exp(logp)  # underflow to 0 is the intended pole limit
    return out


def _cumulative_table(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid and exact-intent CDF values of P_m on [0, pi].

    Each cell of the uniform grid is integrated with a 7-node
    Gauss-Legendre panel (vectorized), then cumulatively summed and
    renormalized so the last entry is exactly 1.
    """
    grid = np.linspace(0.0, numerics.PI, SAMPLER_GRID_POINTS)
    nodes, weights = np.polynomial.legendre.leggauss(7)
    lo = grid[:-1]
    half = 0.5 * (grid[1:] - lo)
    pts = lo[:, None] + half[:, None] * (nodes[None, :] + 1.0)
    pdf = _vector_density(m, pts, -numerics.log_sine_integral(2 * m + 1))
    cell = half * (pdf * weights[None, :]).sum(axis=1)
    cdf = np.concatenate(([0.0], np.cumsum(cell)))
    cdf /= cdf[-1]
    return grid, cdf


def sample_polar(
    m: int,
    count: int,
    seed: int,
    cap: int = DEFAULT_SAMPLE_CAP,
) -> SampleBatch:
    """Draw ``count`` polar angles from P_m, reproducibly from ``seed``.

    Inverse-CDF sampling: a monotone cubic (PCHIP) interpolant of the
    cumulative table is inverted by a linear-interpolation first guess
    followed by Newton steps against the analytic density.  The random
    stream is a per-call numpy Generator, never process-global.
    """
    m = _check_m(m)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if count > cap:
        raise ResourceError(f"count {count} exceeds sampling cap {cap}")

    grid, cdf = _cumulative_table(m)
    # flat CDF stretches near the poles trip a benign overflow warning in
    # scipy's slope weighting; the interpolant itself stays monotone
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        cdf_interp = PchipInterpolator(grid, cdf)
    density = PolarDensity.for_m(m)

    rng = np.random.default_rng(seed)
    u = rng.random(count)

    theta = np.interp(u, cdf, grid)
    eps = 1e-12
    for _ in range(4):
        pdf = _vector_density(m, theta, density.log_norm)
        step = np.where(pdf > 0.0, (cdf_interp(theta) - u) / np.maximum(pdf, 1e-300), 0.0)
        theta = np.clip(theta - step, eps, numerics.PI - eps)

    return SampleBatch(m=m, seed=seed, thetas=theta)
