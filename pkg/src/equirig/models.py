"""Physical realizations: rigid rotor and thin spherical shell.

Units: hbar = 1 throughout, so energies are in hbar^2/(mass * length^2).
Only |f0|^2 of the radial ground mode ever enters a result, so profiles
are accepted as real-valued; complex phases are unsupported.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Sequence

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, ParseError, ProfileError

#: Unit convention recorded in outputs.
ENERGY_UNITS = "hbar^2/(mass*length^2), hbar=1"

#: Endpoint amplitudes above this fraction of the max trigger a truncation warning.
ENDPOINT_DECAY_FRACTION = 1e-3


@dataclass(frozen=True)
class RotorConfig:
    """Rigid rotor with moment of inertia I (= M R^2)."""

    moment_of_inertia: float

    def __post_init__(self) -> None:
        if not self.moment_of_inertia > 0:
            raise DomainError(f"moment of inertia must be > 0, got {self.moment_of_inertia}")

    @classmethod
    def from_mass_radius(cls, mass: float, radius: float) -> "RotorConfig":
        if not (mass > 0 and radius > 0):
            raise DomainError("mass and radius must both be > 0")
        return cls(moment_of_inertia=mass * radius * radius)


@dataclass(frozen=True)
class SpectrumEntry:
    ell: int
    energy: float
    offset_included: bool
    units: str = ENERGY_UNITS


@dataclass(frozen=True)
class RadialProfile:
    """Tabulated radial ground mode f0(r).

    The profile must satisfy int r^2 |f0|^2 dr = 1 within
    ``declared_norm_tol`` under Simpson integration on the given grid.
    ``scale_factor`` records any normalization rescale applied on load;
    ``warnings`` carries non-fatal data-quality notes (truncated tails).
    """

    r_grid: np.ndarray = field(repr=False)
    f0_values: np.ndarray = field(repr=False)
    declared_norm_tol: float = 1e-6
    scale_factor: float = 1.0
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        r = np.asarray(self.r_grid, dtype=float)
        f0 = np.asarray(self.f0_values, dtype=float)
        object.__setattr__(self, "r_grid", r)
        object.__setattr__(self, "f0_values", f0)
        if r.ndim != 1 or r.shape != f0.shape:
            raise ProfileError("r grid and f0 values must be 1-D arrays of equal length")
        if r.size < 4:
            raise ProfileError(f"profile needs at least 4 points, got {r.size}")
        if not np.all(np.diff(r) > 0):
            raise ProfileError("r grid must be strictly increasing")
        if r[0] < 0:
            raise ProfileError("r grid must be non-negative")

    @classmethod
    def from_samples(
        cls,
        r: Sequence[float],
        f0: Sequence[float],
        declared_norm_tol: float = 1e-6,
        normalize: bool = True,
    ) -> "RadialProfile":
        """Build a profile, rescaling f0 to unit norm when requested.

        The applied amplitude scale factor is recorded on the result;
        truncated tails (endpoint amplitude above 1e-3 of the max) set a
        warning instead of failing.
        """
        # Construct once unscaled so structural errors surface as ProfileError
        # before any integration is attempted.
        unscaled = cls(r_grid=np.asarray(r, dtype=float), f0_values=np.asarray(f0, dtype=float),
                       declared_norm_tol=declared_norm_tol)
        r_arr, f0_arr = unscaled.r_grid, unscaled.f0_values
        norm = simpson(r_arr**2 * f0_arr**2, x=r_arr)
        if not norm > 0:
            raise ProfileError("profile has zero norm")
        scale = 1.0
        if normalize:
            scale = 1.0 / math.sqrt(norm)
            f0_arr = f0_arr * scale
        warnings: list[str] = []
        peak = float(np.max(np.abs(f0_arr)))
        for label, value in (("first", f0_arr[0]), ("last", f0_arr[-1])):
            if abs(value) > ENDPOINT_DECAY_FRACTION * peak:
                warnings.append(f"{label} grid point amplitude {value:.3g} suggests a truncated tail")
        return cls(
            r_grid=r_arr,
            f0_values=f0_arr,
            declared_norm_tol=declared_norm_tol,
            scale_factor=scale,
            warnings=tuple(warnings),
        )

    def norm_integral(self) -> float:
        """int r^2 |f0|^2 dr under the module's composite rule."""
        return float(simpson(self.r_grid**2 * self.f0_values**2, x=self.r_grid))


@dataclass(frozen=True)
class ShellReduction:
    """Outcome of freezing the radial mode of a thin shell."""

    r_minus2_expectation: float
    effective_radius: float
    radial_ground_energy: float


def rotor_energy(ell: int, cfg: RotorConfig) -> SpectrumEntry:
    """Rotor level E_ell = ell(ell+1)/(2I); independent of m."""
    if ell < 0:
        raise DomainError(f"need ell >= 0, got {ell}")
    return SpectrumEntry(
        ell=ell,
        energy=ell * (ell + 1) / (2.0 * cfg.moment_of_inertia),
        offset_included=False,
    )


def r_minus2_expectation(p: RadialProfile) -> float:
    """<r^-2> under the radial measure r^2 |f0|^2 dr.

    The r^2 measure cancels the r^-2 weight analytically, so this is just
    int |f0|^2 dr on the tabulated grid.
    """
    norm = p.norm_integral()
    if abs(norm - 1.0) > p.declared_norm_tol:
        raise ProfileError(
            f"profile norm integral {norm} violates unit normalization "
            f"(tolerance {p.declared_norm_tol}); load with normalize=True"
        )
    return float(simpson(p.f0_values**2, x=p.r_grid))


def shell_reduce(p: RadialProfile, radial_ground_energy: float) -> ShellReduction:
    """Project onto the frozen radial mode: R_eff = <r^-2>^(-1/2).

    The radial ground energy is an input passed through unchanged; this
    module never solves the radial problem.
    """
    expectation = r_minus2_expectation(p)
    return ShellReduction(
        r_minus2_expectation=expectation,
        effective_radius=expectation**-0.5,
        radial_ground_energy=radial_ground_energy,
    )


def shell_spectrum(ell: int, mass: float, reduction: ShellReduction) -> SpectrumEntry:
    """Surface level E_r0 + ell(ell+1)/(2 M R_eff^2)."""
    if ell < 0:
        raise DomainError(f"need ell >= 0, got {ell}")
    if not mass > 0:
        raise DomainError(f"mass must be > 0, got {mass}")
    kinetic = ell * (ell + 1) / (2.0 * mass * reduction.effective_radius**2)
    return SpectrumEntry(
        ell=ell,
        energy=reduction.radial_ground_energy + kinetic,
        offset_included=True,
    )


def load_radial_profile(source: BinaryIO | bytes | str | Path) -> RadialProfile:
    """Parse the radial-profile CSV format.

    UTF-8, header line ``r,f0``, one float pair per row, lines starting
    with ``#`` ignored.  Raw data is rescaled to unit norm; the applied
    scale factor and any tail warnings are carried on the result.
    """
    if isinstance(source, (str, Path)):
        raw = Path(source).read_bytes()
    elif isinstance(source, bytes):
        raw = source
    else:
        raw = source.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"profile is not valid UTF-8: {exc}") from exc

    rows: list[tuple[float, float]] = []
    header_seen = False
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not record or (record[0].lstrip().startswith("#")):
            continue
        if not header_seen:
            if [c.strip().lower() for c in record] != ["r", "f0"]:
                raise ParseError(f"row {lineno}: expected header 'r,f0', got {','.join(record)!r}")
            header_seen = True
            continue
        if len(record) != 2:
            raise ParseError(f"row {lineno}: expected 2 columns, got {len(record)}")
        try:
            rows.append((float(record[0]), float(record[1])))
        except ValueError as exc:
            raise ParseError(f"row {lineno}: non-numeric cell in {record!r}") from exc
    if not header_seen:
        raise ParseError("missing 'r,f0' header line")
    if len(rows) < 4:
        raise ProfileError(f"profile needs at least 4 data rows, got {len(rows)}")
    r, f0 = zip(*rows)
    return RadialProfile.from_samples(r, f0)
