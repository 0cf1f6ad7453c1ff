"""Command-line surface: plot-ready CSV/JSON tables, no rendering.

Subcommands: rigidity | density | pi | sample | shell.  Data goes to
stdout (or --out), diagnostics to stderr.  Exit codes: 0 success,
1 computation/data failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__, models, rigidity, spherical
from .errors import DomainError, EquirigError
from .numerics import PI


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    destination: Path | None = None  # None means stdout
    precision: int = 15

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format}")
        if not 1 <= self.precision <= 17:
            raise DomainError(f"precision must be in [1, 17], got {self.precision}")


def _fmt(value: Any, precision: int) -> str:
    """Shortest round-trip decimal form at the requested precision."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if precision >= 17:
        return repr(x)
    return format(x, f".{precision}g")


def _json_number(value: Any, precision: int) -> Any:
    if value is None or isinstance(value, (bool, int, np.integer, str)):
        return int(value) if isinstance(value, np.integer) else value
    return float(_fmt(value, precision))


def _emit(
    out: OutputSpec,
    manifest: dict[str, Any],
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    summary: dict[str, Any] | None = None,
) -> None:
    p = out.precision
    if out.format == "json":
        payload = {
            "manifest": manifest,
            "columns": list(columns),
            "rows": [[_json_number(v, p) for v in row] for row in rows],
        }
        if summary is not None:
            payload["summary"] = {k: _json_number(v, p) for k, v in summary.items()}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v, p) for v in row) for row in rows]
        if summary is not None:
            lines += [f"# {k}={_fmt(v, p)}" for k, v in summary.items()]
        text = "\n".join(lines) + "\n"
    if out.destination is None:
        sys.stdout.write(text)
    else:
        out.destination.write_text(text, encoding="utf-8")


def _manifest(command: str, parameters: dict[str, Any], seed: int | None = None) -> dict[str, Any]:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "tool_version": __version__,
        "units": models.ENERGY_UNITS,
    }


def _resolve_m_list(args: argparse.Namespace) -> list[int]:
    if args.m is not None and args.m_max is not None:
        raise DomainError("give either --m or --m-max, not both")
    if args.m is not None:
        ms = list(args.m)
    elif args.m_max is not None:
        if args.m_max < 0:
            raise DomainError(f"--m-max must be >= 0, got {args.m_max}")
        ms = list(range(0, args.m_max + 1, args.stride))
    else:
        raise DomainError("one of --m or --m-max is required")
    for m in ms:
        if m < 0:
            raise DomainError(f"quantum index must be non-negative, got {m}")
    return ms


def _cmd_rigidity(args: argparse.Namespace, out: OutputSpec) -> int:
    ms = _resolve_m_list(args)
    reports = rigidity.convergence_table(ms, tol=args.tol)
    columns = ["m", "R_product", "R_gamma", "R_quadrature", "R_asymptotic", "defect", "spread"]
    rows = []
    for rep in reports:
        if rep.error is not None:
            print(f"equirig: m={rep.m}: {rep.error}", file=sys.stderr)
        rows.append(
            [rep.m, rep.via_product, rep.via_gamma, rep.via_quadrature,
             rep.asymptotic, rep.defect, rep.cross_route_spread]
        )
    _emit(out, _manifest("rigidity", {"m": ms, "tol": args.tol}), columns, rows)
    return 0


def _cmd_density(args: argparse.Namespace, out: OutputSpec) -> int:
    ms = _resolve_m_list(args)
    if args.points < 2:
        raise DomainError(f"--points must be >= 2, got {args.points}")
    thetas = np.linspace(0.0, PI, args.points)
    columns = ["theta"]
    series: list[np.ndarray] = []
    for m in ms:
        d = spherical.PolarDensity.for_m(m)
        columns.append(f"P_m{m}")
        series.append(np.array([spherical.density_at(d, t) for t in thetas]))
        if args.gaussian:
            columns.append(f"gauss_m{m}")
            series.append(np.array([spherical.gaussian_approx(m, t - PI / 2) for t in thetas]))
    rows = [[thetas[i]] + [col[i] for col in series] for i in range(args.points)]
    params = {"m": ms, "points": args.points, "gaussian": bool(args.gaussian)}
    _emit(out, _manifest("density", params), columns, rows)
    return 0


def _cmd_pi(args: argparse.Namespace, out: OutputSpec) -> int:
    if args.m_max < 0:
        raise DomainError(f"--m-max must be >= 0, got {args.m_max}")
    if args.m_max > rigidity.DEFAULT_EXACT_CAP:
        # computation-level failure, not a usage error: the cap protects runtime
        from .errors import ResourceError

        raise ResourceError(
            f"--m-max {args.m_max} exceeds exact-arithmetic cap {rigidity.DEFAULT_EXACT_CAP}"
        )
    columns = ["m", "pi_estimate", "error", "scaled_error"]
    rows: list[list[Any]] = []
    num, den = 2, 1  # running exact 2 W_m as a big-integer ratio
    for m in range(args.m_max + 1):
        if m > 0:
            num *= 4 * m * m
            den *= (2 * m - 1) * (2 * m + 1)
        estimate = num / den  # big-int true division is correctly rounded
        err = PI - estimate
        rows.append([m, estimate, err, m * err])
    _emit(out, _manifest("pi", {"m_max": args.m_max}), columns, rows)
    return 0


def _cmd_sample(args: argparse.Namespace, out: OutputSpec) -> int:
    if args.m < 0:
        raise DomainError(f"--m must be >= 0, got {args.m}")
    if args.count < 1:
        raise DomainError(f"--count must be >= 1, got {args.count}")
    batch = spherical.sample_polar(args.m, args.count, args.seed)
    t = batch.thetas
    n = t.size

    def with_se(values: np.ndarray) -> tuple[float, float]:
        mean = float(values.mean())
        se = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return mean, se

    mean_theta, se_theta = with_se(t)
    cos2 = np.cos(t) ** 2
    mean_cos2, se_cos2 = with_se(cos2)
    summary: dict[str, Any] = {
        "count": n,
        "mean_theta": mean_theta,
        "se_mean_theta": se_theta,
        "target_mean_theta": PI / 2,
        "mean_cos2": mean_cos2,
        "se_cos2": se_cos2,
        "target_cos2": 1.0 / (2 * args.m + 3),
    }
    if args.m >= 1:
        csc = 1.0 / np.sin(t)
        mean_csc, se_csc = with_se(csc)
        summary.update(
            mean_csc=mean_csc,
            se_csc=se_csc,
            target_csc=spherical.csc_expectation(args.m),
        )
    rows = [[x] for x in t]
    params = {"m": args.m, "count": args.count}
    _emit(out, _manifest("sample", params, seed=args.seed), ["theta"], rows, summary=summary)
    return 0


def _cmd_shell(args: argparse.Namespace, out: OutputSpec) -> int:
    if args.ell_max < 0:
        raise DomainError(f"--ell-max must be >= 0, got {args.ell_max}")
    if not args.mass > 0:
        raise DomainError(f"--mass must be > 0, got {args.mass}")
    profile = models.load_radial_profile(Path(args.profile))
    reduction = models.shell_reduce(profile, args.radial_energy)
    for note in profile.warnings:
        print(f"equirig: warning: {note}", file=sys.stderr)
    rows = []
    for ell in range(args.ell_max + 1):
        entry = models.shell_spectrum(ell, args.mass, reduction)
        rows.append([entry.ell, entry.energy])
    summary = {
        "R_eff": reduction.effective_radius,
        "r_minus2_expectation": reduction.r_minus2_expectation,
        "normalization_scale": profile.scale_factor,
        "radial_energy": args.radial_energy,
        "mass": args.mass,
    }
    params = {
        "profile": str(args.profile),
        "mass": args.mass,
        "radial_energy": args.radial_energy,
        "ell_max": args.ell_max,
    }
    _emit(out, _manifest("shell", params), ["ell", "energy"], rows, summary=summary)
    return 0


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=None, help="output path (default: stdout)")
    p.add_argument("--precision", type=int, default=15, help="significant digits, 1-17")


def _add_m_selection(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, nargs="+", default=None, help="explicit list of quantum indices")
    p.add_argument("--m-max", type=int, default=None, help="range 0..m_max")
    p.add_argument("--stride", type=int, default=1, help="stride for --m-max ranges")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equirig",
        description="Equatorial rigidity index, Wallis products, and spherical localization tables.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rigidity", help="rigidity index by three routes, with defect and spread")
    _add_m_selection(p)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_output_args(p)
    p.set_defaults(handler=_cmd_rigidity)

    p = sub.add_parser("density", help="polar density curves on a uniform theta grid")
    _add_m_selection(p)
    p.add_argument("--points", type=int, default=721)
    p.add_argument("--gaussian", action="store_true", help="add Gaussian-approximation columns")
    _add_output_args(p)
    p.set_defaults(handler=_cmd_density)

    p = sub.add_parser("pi", help="pi estimates 2 W_m with error law columns")
    p.add_argument("--m-max", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(handler=_cmd_pi)

    p = sub.add_parser("sample", help="reproducible draws from the polar density")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("shell", help="thin-shell reduction and surface spectrum from a profile CSV")
    p.add_argument("--profile", required=True, help="radial-profile CSV path (header r,f0)")
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--radial-energy", type=float, default=0.0)
    p.add_argument("--ell-max", type=int, default=10)
    _add_output_args(p)
    p.set_defaults(handler=_cmd_shell)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = OutputSpec(format=args.format, destination=args.out, precision=args.precision)
        return args.handler(args, out)
    except DomainError as exc:
        print(f"equirig: error: {exc}", file=sys.stderr)
        return 2
    except EquirigError as exc:
        print(f"equirig: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
