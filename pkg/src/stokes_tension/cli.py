"""``stokes-tension solve|eig|sweep|verify --config <path> [--out DIR] [--n N] [--format csv,json]``.

Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _hot
from .checks import Check, run_checks
from .config import RunConfig, _line_of, check_n_points, load_config, parse_formats
from .errors import ConfigError, IllConditioned, NumericalError, SingularPoint, TooCloseToInterface
from .oracles import table1_exact
from .potentials import FIELD_COLUMNS, evaluate_fields
from .spectra import SweepResult, eigenvalue_sweep, lambda2, spectrum
from .spectral import PeriodicGrid, fourier_derivative, l2_norm
from .tension import solve_tension

log = logging.getLogger("stokes_tension")

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclass
class Table:
    columns: list[str]
    rows: list[list[float]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()


def fmt(v) -> str:
    """Round-trippable text for a number (17 significant digits)."""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


@dataclass
class ResultBundle:
    summary: dict = field(default_factory=dict)
    tables: dict[str, Table] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    extra_json: dict[str, dict] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def write(self, out_dir: Path, formats=("csv", "json")) -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        if "csv" in formats:
            for name, table in self.tables.items():
                p = out_dir / f"{name}.csv"
                with open(p, "w", encoding="utf-8", newline="") as fh:
                    fh.write(table.to_csv())
                written.append(p)
        if "json" in formats:
            docs = {"summary": {**self.summary, **_check_summary(self.checks)}, **self.extra_json}
            for name, doc in docs.items():
                p = out_dir / f"{name}.json"
                with open(p, "w", encoding="utf-8", newline="\n") as fh:
                    json.dump(_jsonable(doc), fh, indent=2, sort_keys=True)
                    fh.write("\n")
                written.append(p)
        return written


def _check_summary(checks):
    if not checks:
        return {}
    return {
        "n_checks": len(checks),
        "n_passed": sum(c.passed for c in checks),
        "all_pass": all(c.passed for c in checks),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _base_summary(command: str, cfg: RunConfig) -> dict:
    return {
        "command": command,
        "preset": cfg.preset,
        "n_points": cfg.n_points,
        "seed": cfg.seed,
        "version": __version__,
        "numpy_version": np.__version__,
        "backend": _hot.BACKEND,
    }


# -- commands ---------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> ResultBundle:
    t0 = time.perf_counter()
    curve = cfg.build_curve()
    F = cfg.build_force()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditioned)
        sol = solve_tension(curve, F, cfg.mode)
    th = curve.theta
    summary = _base_summary("solve", cfg)
    summary.update(
        mode_requested=cfg.mode,
        mode=sol.mode,
        sigma_norm_inf=float(np.abs(sol.sigma).max()),
        sigma_norm_l2=l2_norm(sol.sigma),
        velocity_norm_inf=float(np.abs(sol.interface_velocity).max()),
        residual_inext=sol.residual_inext,
        condition_estimate=sol.condition_estimate,
        multiplier=sol.multiplier,
        ill_conditioned=any(issubclass(w.category, IllConditioned) for w in caught),
    )
    bundle = ResultBundle(summary=summary)
    bundle.tables["sigma"] = Table(["theta", "sigma"], [[t, s] for t, s in zip(th, sol.sigma)])
    U = sol.interface_velocity
    bundle.tables["velocity"] = Table(["theta", "u1", "u2"], [[t, u[0], u[1]] for t, u in zip(th, U)])

    if cfg.force.get("type") == "table1" and cfg.curve.get("type") == "fourier":
        s_ex, U_ex = table1_exact(PeriodicGrid(cfg.n_points))
        errs = {
            "sigma_error_inf": float(np.abs(sol.sigma - s_ex).max()),
            "sigma_error_l2": l2_norm(sol.sigma - s_ex),
            "velocity_error_inf": float(np.abs(U - U_ex).max()),
            "velocity_error_l2": l2_norm(U - U_ex),
        }
        summary.update(errs)
        bundle.checks += [
            Check("table1_sigma", errs["sigma_error_inf"], 1e-10),
            Check("table1_velocity", errs["velocity_error_inf"], 1e-10),
        ]

    if cfg.fields:
        # fields of the full interface force: F plus the tension force
        density = F + fourier_derivative(sol.sigma[:, None] * curve.tangent)
        samples = evaluate_fields(curve, density, np.asarray(cfg.fields, dtype=float))
        bundle.tables["fields"] = Table(list(FIELD_COLUMNS), [s.as_row() for s in samples])
    summary["seconds"] = time.perf_counter() - t0
    return bundle


def cmd_eig(cfg: RunConfig) -> ResultBundle:
    t0 = time.perf_counter()
    curve = cfg.build_curve()
    eps = float(cfg.curve.get("epsilon", np.nan)) if cfg.curve.get("type") == "perturbed_circle" else np.nan
    rep = spectrum(curve, eps)
    summary = _base_summary("eig", cfg)
    summary.update(leading=rep.leading, asymmetry=rep.asymmetry, epsilon=rep.epsilon)
    if cfg.curve.get("type") == "perturbed_circle":
        lam2 = lambda2(cfg.perturbation())
        summary.update(lambda2_formula=lam2, lambda2_prediction=lam2 * eps * eps)
    bundle = ResultBundle(summary=summary)
    bundle.tables["spectrum"] = Table(["index", "eigenvalue"], [[i, v] for i, v in enumerate(rep.eigenvalues)])
    bundle.extra_json["spectrum"] = {**summary, "eigenvalues": rep.eigenvalues}
    summary["seconds"] = time.perf_counter() - t0
    return bundle


def cmd_sweep(cfg: RunConfig) -> ResultBundle:
    if not cfg.epsilons:
        raise ConfigError(f"field 'sweep.epsilons': empty epsilon list{_line(cfg, 'epsilons')}")
    if any(e <= 0 for e in cfg.epsilons):
        raise ConfigError(f"field 'sweep.epsilons': values must be strictly positive{_line(cfg, 'epsilons')}")
    t0 = time.perf_counter()
    g = cfg.perturbation()
    res: SweepResult = eigenvalue_sweep(g, cfg.epsilons, cfg.n_points, workers=max(1, cfg.workers))
    summary = _base_summary("sweep", cfg)
    summary.update(
        lambda2_fit=res.lambda2_fit,
        lambda3_fit=res.lambda3_fit,
        lambda2_formula=lambda2(g),
        n_epsilons=len(cfg.epsilons),
    )
    bundle = ResultBundle(summary=summary)
    bundle.tables["lambda"] = Table(list(SweepResult.COLUMNS), res.rows())
    summary["seconds"] = time.perf_counter() - t0
    return bundle


def cmd_verify(cfg: RunConfig) -> ResultBundle:
    t0 = time.perf_counter()
    checks = run_checks(cfg.level, seed=cfg.seed)
    summary = _base_summary("verify", cfg)
    summary.update(level=cfg.level)
    bundle = ResultBundle(summary=summary, checks=checks)
    bundle.tables["checks"] = Table(
        ["name", "residual", "tolerance", "pass"],
        [[c.name, fmt(c.residual), fmt(c.tolerance), int(c.passed)] for c in checks],
    )
    bundle.extra_json["verify"] = {
        "level": cfg.level,
        "all_pass": bundle.all_pass,
        "checks": [c.as_dict() for c in checks],
    }
    summary["seconds"] = time.perf_counter() - t0
    return bundle


def _line(cfg, key):
    line = _line_of(cfg.source, key)
    return f" (line {line})" if line else ""


COMMANDS = {"solve": cmd_solve, "eig": cmd_eig, "sweep": cmd_sweep, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stokes-tension", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="TOML config path or preset name (table1, example1, example2)")
    p.add_argument("--out", help="output directory (overrides [output].dir)")
    p.add_argument("--n", type=int, help="number of nodes (overrides n_points)")
    p.add_argument("--format", help="comma-separated subset of csv,json")
    p.add_argument("--level", choices=("quick", "full"), help="verify level (overrides [verify].level)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.config is None:
            if args.command != "verify":
                raise ConfigError("--config is required for " + args.command)
            cfg = RunConfig()
        else:
            cfg = load_config(args.config)
        if args.n is not None:
            check_n_points(args.n, "option '--n': ")
            cfg.n_points = args.n
        if args.out is not None:
            cfg.out_dir = Path(args.out)
        if args.format is not None:
            cfg.formats = parse_formats(args.format)
        if args.level is not None:
            cfg.level = args.level
        bundle = COMMANDS[args.command](cfg)
        written = bundle.write(cfg.out_dir, cfg.formats)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, SingularPoint, TooCloseToInterface, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for p in written:
        log.info("wrote %s", p)
    for c in bundle.checks:
        if not c.passed:
            print(f"FAIL {c.name}: residual {c.residual:.3e} > {c.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if bundle.all_pass else EXIT_CHECK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
