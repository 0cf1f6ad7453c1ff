"""Equatorial rigidity index by three independent routes.

The index for quantum number m is, exactly,

    R_m = (2/pi) * prod_{k=1..m} (2k)^2 / ((2k-1)(2k+1))        (Wallis route)
        = Gamma(m+1)^2 / (Gamma(m+1/2) Gamma(m+3/2))            (Gamma route)
        = I_(2m+1) / I_(2m)                                     (quadrature route)

Big-rational arithmetic is the source of truth; the floating routes are
approximations tested against it.  The defect 1 - R_m decays like 1/(4m),
which is what turns the partial products into a pi estimator.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import numerics
from .errors import DomainError, ResourceError
from .numerics import PI

#: Largest m accepted for exact rational arithmetic by default.
DEFAULT_EXACT_CAP = 10**5

#: Above this m the quadrature route is skipped in convergence tables.
DEFAULT_QUADRATURE_CUTOFF = 10**4

#: Environment variable controlling convergence-table worker count.
PARALLEL_ENV_VAR = "EQUIRIG_JOBS"


@dataclass(frozen=True)
class WallisPartial:
    """Exact rational finite Wallis product W_m with its factor list."""

    m: int
    numerator: int
    denominator: int
    factors: tuple[Fraction, ...]

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


@dataclass(frozen=True)
class RigidityReport:
    """One row of the convergence story for a single m."""

    m: int
    via_product: float | None
    via_gamma: float | None
    via_quadrature: float | None
    asymptotic: float | None
    defect: float | None
    cross_route_spread: float | None
    error: str | None = None


def _exact_double_factorial(n: int) -> int:
    return math.prod(range(n, 1, -2))


def wallis_partial(m: int, exact_cap: int = DEFAULT_EXACT_CAP) -> WallisPartial:
    """Exact W_m = ((2m)!!)^2 / ((2m-1)!! (2m+1)!!), reduced."""
    if m < 0:
        raise DomainError(f"need m >= 0, got {m}")
    if m > exact_cap:
        raise ResourceError(f"m={m} exceeds exact-arithmetic cap {exact_cap}")
    even = _exact_double_factorial(2 * m)
    value = Fraction(even * even, _exact_double_factorial(2 * m - 1) * _exact_double_factorial(2 * m + 1))
    factors = tuple(Fraction(4 * k * k, (2 * k - 1) * (2 * k + 1)) for k in range(1, m + 1))
    return WallisPartial(m=m, numerator=value.numerator, denominator=value.denominator, factors=factors)


def rigidity_product(m: int, exact_cap: int = DEFAULT_EXACT_CAP) -> float:
    """(2/pi) W_m, from the exact rational rounded to nearest double."""
    return 2.0 * float(wallis_partial(m, exact_cap).value) / PI


def rigidity_gamma(m: int) -> float:
    """Gamma-ratio route, stable in the log domain for m up to ~10^6."""
    a, b = numerics.log_gamma_half_ratio(m)
    return math.exp(a + b)


def rigidity_quadrature(m: int, tol: float = 1e-12) -> float:
    """I_(2m+1)/I_(2m) with both integrals done numerically.

    Deliberately independent of the closed forms; this is the oracle route
    the exact ones are cross-checked against.
    """
    if m < 0:
        raise DomainError(f"need m >= 0, got {m}")

    def sin_power(n: int):
        def f(theta: float) -> float:
            s = math.sin(theta)
            if s <= 0.0:
                return 0.0
            return math.exp(n * math.log(s)) if n else 1.0

        return f

    odd = numerics.integrate(sin_power(2 * m + 1), 0.0, PI, rel_tol=tol, abs_tol=tol)
    even = numerics.integrate(sin_power(2 * m), 0.0, PI, rel_tol=tol, abs_tol=tol)
    return odd.value / even.value


def rigidity_asymptotic(m: int) -> float:
    """Two-term large-m expansion 1 - 1/(4m) + 5/(32 m^2)."""
    if m < 1:
        raise DomainError(f"asymptotic expansion needs m >= 1, got {m}")
    return 1.0 - 1.0 / (4.0 * m) + 5.0 / (32.0 * m * m)


def defect(m: int) -> float:
    """Rigidity defect 1 - R_m; decays like 1/(4m)."""
    return 1.0 - rigidity_gamma(m)


def pi_estimate(m: int, exact_cap: int = DEFAULT_EXACT_CAP) -> float:
    """2 W_m, which converges to pi with error ~ pi/(4m)."""
    return 2.0 * float(wallis_partial(m, exact_cap).value)


def _report_row(m: int, tol: float, quadrature_cutoff: int, exact_cap: int) -> RigidityReport:
    try:
        via_gamma = rigidity_gamma(m)
        via_product = rigidity_product(m, exact_cap) if m <= exact_cap else None
        via_quadrature = rigidity_quadrature(m, tol) if m <= quadrature_cutoff else None
        asymptotic = rigidity_asymptotic(m) if m >= 1 else None
        routes = [v for v in (via_product, via_gamma, via_quadrature) if v is not None]
        spread = max(routes) - min(routes)
        return RigidityReport(
            m=m,
            via_product=via_product,
            via_gamma=via_gamma,
            via_quadrature=via_quadrature,
            asymptotic=asymptotic,
            defect=1.0 - via_gamma,
            cross_route_spread=spread,
        )
    except Exception as exc:  # row-level isolation: one bad m must not kill the table
        return RigidityReport(
            m=m,
            via_product=None,
            via_gamma=None,
            via_quadrature=None,
            asymptotic=None,
            defect=None,
            cross_route_spread=None,
            error=f"{type(exc).__name__}: {exc}",
        )


def _worker_count() -> int:
    raw = os.environ.get(PARALLEL_ENV_VAR)
    if raw is not None:
        try:
            n = int(raw)
        except ValueError:
            raise DomainError(f"{PARALLEL_ENV_VAR} must be an integer, got {raw!r}")
        if n < 1:
            raise DomainError(f"{PARALLEL_ENV_VAR} must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def convergence_table(
    m_values: Sequence[int],
    tol: float = 1e-12,
    quadrature_cutoff: int = DEFAULT_QUADRATURE_CUTOFF,
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> list[RigidityReport]:
    """One RigidityReport per requested m, in input order.

    Rows are evaluated on a thread pool sized by the EQUIRIG_JOBS
    environment variable (default: available processors); failures are
    recorded per-row rather than aborting the table.
    """
    if not m_values:
        raise DomainError("m_values must be non-empty")
    for m in m_values:
        if m < 0:
            raise DomainError(f"need m >= 0, got {m}")
    workers = min(_worker_count(), len(m_values))
    if workers == 1:
        return [_report_row(m, tol, quadrature_cutoff, exact_cap) for m in m_values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda m: _report_row(m, tol, quadrature_cutoff, exact_cap), m_values))
