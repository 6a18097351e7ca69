"""``wellblock-lab``: config-driven experiment runner.

Each experiment writes ``<experiment>.csv`` and ``<experiment>.json`` into the
output directory. CSV floats use 17 significant digits so that rerunning a
config reproduces the file byte for byte.

Plotting recipes (run outside this tool):
  verify-peaceman     pandas.read_csv(f).plot(x="M", y="r0_over_delta", logx=True)
  forchheimer-radius  pandas.read_csv(f).plot(x="q", y="r0_over_delta", logx=True)
  dake-compare        pandas.read_csv(f).plot(x="delta", y="difference", loglog=True)
  green-check         pandas.read_csv(f).plot(x="delta", y="fd_deviation", loglog=True)
  well-index          pandas.read_csv(f).plot(x="q", y="t_w")
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, replace
from importlib import metadata
from pathlib import Path
from typing import Any, Callable

from . import fd_grid, radial_flow, well_model
from .core import (
    ConfigError,
    FluidRockParams,
    GridSpec,
    SolverError,
    ValidationReport,
    WellSpec,
    validate_config,
)

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3
ENV_OUT = "WELLBLOCK_OUT"
DEFAULT_OUT = "results"

_TOP_KEYS = {"experiment", "fluid", "grid", "well", "sweep", "output_dir", "solver_tol"}
_BLOCK_KEYS = {
    "fluid": ({"mu", "k", "h"}, {"beta1"}),
    "grid": ({"L", "M"}, set()),
    "well": ({"r_w", "q"}, {"theta"}),
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    fluid: FluidRockParams
    grid: GridSpec
    well: WellSpec
    sweep: tuple[float, ...] | None = None
    output_dir: str | None = None
    solver_tol: float = fd_grid.DEFAULT_TOL

    def echo(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "fluid": asdict(self.fluid),
            "grid": asdict(self.grid),
            "well": asdict(self.well),
            "sweep": list(self.sweep) if self.sweep is not None else None,
            "solver_tol": self.solver_tol,
        }


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return value


def _block(raw: dict, name: str) -> dict[str, Any]:
    block = raw.get(name)
    if not isinstance(block, dict):
        raise ConfigError(f"missing or malformed block {name!r}")
    required, optional = _BLOCK_KEYS[name]
    unknown = set(block) - required - optional
    if unknown:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(unknown)}")
    missing = required - set(block)
    if missing:
        raise ConfigError(f"missing keys in {name!r}: {sorted(missing)}")
    return {k: _number(v, f"{name}.{k}") for k, v in block.items()}


def parse_config(raw: Any) -> ExperimentConfig:
    """Build an ExperimentConfig from a decoded JSON document; unknown keys fail."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    name = raw.get("experiment")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")

    grid_raw = _block(raw, "grid")
    if grid_raw["M"] != int(grid_raw["M"]):
        raise ConfigError("grid.M must be an integer")
    grid = GridSpec(float(grid_raw["L"]), int(grid_raw["M"]))
    fluid = FluidRockParams(**{k: float(v) for k, v in _block(raw, "fluid").items()})
    well = WellSpec(**{k: float(v) for k, v in _block(raw, "well").items()})

    sweep = raw.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, list) or not sweep:
            raise ConfigError("sweep must be a non-empty list")
        sweep = tuple(_number(v, "sweep entry") for v in sweep)
        if any(v <= 0 for v in sweep):
            raise ConfigError("sweep values must be positive")

    out = raw.get("output_dir")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output_dir must be a string")
    tol = float(_number(raw.get("solver_tol", fd_grid.DEFAULT_TOL), "solver_tol"))
    return ExperimentConfig(name, fluid, grid, well, sweep, out, tol)


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw)


# --- experiments --------------------------------------------------------------
# Each returns (columns, rows, summary). Rows hold plain numbers computed by
# library calls only.

Rows = list[dict[str, float]]


def _sweep(cfg: ExperimentConfig, default: tuple[float, ...]) -> tuple[float, ...]:
    return cfg.sweep if cfg.sweep is not None else default


def run_verify_peaceman(cfg: ExperimentConfig):
    Ms = _sweep(cfg, (cfg.grid.M,))
    if any(m != int(m) or m < 2 for m in Ms):
        raise ConfigError("verify-peaceman sweep entries are block counts M >= 2")
    q = cfg.well.q
    rows: Rows = []
    for M in Ms:
        grid = GridSpec(cfg.grid.L, int(M))
        field = fd_grid.solve_point_source(grid, cfg.fluid, q, cfg.solver_tol)
        bp = fd_grid.block_pressures(field)
        est = fd_grid.estimate_r0_numeric(field, cfg.fluid, q)
        rows.append({
            "M": int(M),
            "delta": grid.delta,
            "p0": bp["p0"],
            "p1": bp["p1"],
            "p1_minus_p0": bp["p1"] - bp["p0"],
            "r0_over_delta": est.r0_over_delta,
            "slope": est.slope,
            "fit_rms": est.fit_rms,
        })
    summary = {
        "alpha_q_over_4": 0.25 * cfg.fluid.alpha * q,
        "expected_slope": fd_grid.expected_slope(cfg.fluid, q),
        "peaceman_ratio": well_model.peaceman_radius_darcy(1.0),
    }
    return list(rows[0]), rows, summary


def run_forchheimer_radius(cfg: ExperimentConfig):
    delta = cfg.grid.delta
    rows: Rows = []
    for q in _sweep(cfg, (cfg.well.q,)):
        rad = well_model.forchheimer_radius(cfg.fluid, q, delta)
        rows.append({
            "q": q,
            "delta_factor": rad["delta_factor"],
            "r0": rad["r0"],
            "r0_over_delta": rad["r0"] / delta,
        })
    summary = {"delta": delta, "r0_darcy": well_model.peaceman_radius_darcy(delta)}
    return list(rows[0]), rows, summary


def run_dake_compare(cfg: ExperimentConfig):
    q, r_w, fluid = cfg.well.q, cfg.well.r_w, cfg.fluid
    rows: Rows = []
    for delta in _sweep(cfg, (cfg.grid.delta,)):
        sim = well_model.dake_drop_simulator(q, fluid, delta, r_w)
        cor = well_model.dake_drop_correct(q, fluid, delta, r_w)
        rows.append({
            "delta": delta,
            "drop_simulator": sim,
            "drop_correct": cor,
            "difference": sim - cor,
            "beta_q2_over_4pi2_delta": fluid.beta * q * q / (4.0 * math.pi**2 * delta),
        })
    summary = {"d_factor": well_model.d_factor(fluid, r_w)}
    return list(rows[0]), rows, summary


def run_green_check(cfg: ExperimentConfig):
    L = cfg.grid.L
    radii = _sweep(cfg, (0.1 * L, 0.05 * L, 0.025 * L))
    field = fd_grid.solve_point_source(cfg.grid, cfg.fluid, cfg.well.q, cfg.solver_tol)
    fd = fd_grid.green_oscillation_fd(field, cfg.fluid, cfg.well.q, radii)
    rows: Rows = []
    for delta, fd_row in zip(radii, fd):
        disk = fd_grid.green_oscillation_check(L, delta)
        rows.append({
            "delta": delta,
            "r0": disk["r0_used"],
            "disk_value": disk["value"],
            "fd_value": fd_row["value"],
            "fd_deviation": fd_row["deviation"],
        })
    flux = fd_grid.contour_flux(field, 1.0 / cfg.fluid.alpha, cfg.grid.M // 2)
    summary = {"contour_flux": flux, "residual_norm": field.residual_norm}
    return list(rows[0]), rows, summary


def run_well_index(cfg: ExperimentConfig):
    fluid, grid, r_w = cfg.fluid, cfg.grid, cfg.well.r_w
    delta = grid.delta
    closed = (
        well_model.well_index_darcy(fluid, delta, r_w)
        if r_w < well_model.peaceman_radius_darcy(delta)
        else math.nan
    )
    rows: Rows = []
    for q in _sweep(cfg, (cfg.well.q,)):
        field = fd_grid.solve_point_source(grid, fluid, q, cfg.solver_tol)
        p0 = field.p0
        p_w = radial_flow.reconstruct_pw_darcy(p0, q, fluid.alpha, delta, r_w)
        rows.append({
            "q": q,
            "p0": p0,
            "p_w": p_w,
            "drawdown": p0 - p_w,
            "t_w": well_model.well_index(q, fluid.mu, p0, p_w),
            "t_w_closed_form": closed,
        })
    return list(rows[0]), rows, {"delta": delta}


EXPERIMENTS: dict[str, Callable] = {
    "verify-peaceman": run_verify_peaceman,
    "forchheimer-radius": run_forchheimer_radius,
    "dake-compare": run_dake_compare,
    "green-check": run_green_check,
    "well-index": run_well_index,
}


# --- output -------------------------------------------------------------------

def format_value(v: Any) -> str:
    if isinstance(v, (bool, int)):
        return str(v)
    return format(float(v), ".17g")


def render_csv(columns: list[str], rows: Rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(obj: Any) -> Any:
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


@dataclass(frozen=True)
class ReportBundle:
    csv_path: Path
    json_path: Path
    rows: Rows
    summary: dict[str, Any]


def resolve_output_dir(cfg: ExperimentConfig, override: str | None = None) -> Path:
    return Path(override or cfg.output_dir or os.environ.get(ENV_OUT) or DEFAULT_OUT)


def run_experiment(cfg: ExperimentConfig, out_dir: str | os.PathLike | None = None) -> ReportBundle:
    report = validate_config(cfg.fluid, cfg.grid, cfg.well)
    if not report.ok:
        raise ConfigError(str(report))
    columns, rows, summary = EXPERIMENTS[cfg.experiment](cfg)

    out = Path(out_dir) if out_dir is not None else resolve_output_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{cfg.experiment}.csv"
    json_path = out / f"{cfg.experiment}.json"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(columns, rows))

    doc = {
        "version": version_string(),
        "inputs": cfg.echo(),
        "derived": {
            "alpha": cfg.fluid.alpha,
            "alpha1": cfg.fluid.alpha1,
            "beta": cfg.fluid.beta,
            "delta": cfg.grid.delta,
            "theta": cfg.well.theta,
            "reconstruction_branch": report.branch,
            "warnings": list(report.warnings),
        },
        "summary": summary,
        "columns": columns,
        "rows": rows,
        "csv": csv_path.name,
    }
    json_path.write_text(
        json.dumps(_json_safe(doc), indent=2, sort_keys=False) + "\n", encoding="utf-8"
    )
    return ReportBundle(csv_path, json_path, rows, summary)


# --- entry point --------------------------------------------------------------

def build_hash() -> str:
    """Digest of the package sources; stable for a given build."""
    digest = hashlib.sha256()
    for path in sorted(Path(__file__).parent.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()[:12]


def version_string() -> str:
    try:
        ver = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        from . import __version__ as ver
    return f"{ver}+{build_hash()}"


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wellblock-lab",
        description="Well-block radius experiments for Darcy and Forchheimer flow.",
    )
    parser.add_argument("--version", action="version", version=f"wellblock-lab {version_string()}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment described by a config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", help=f"output directory (else config output_dir, else ${ENV_OUT})")
    run.add_argument("--tol", type=float, help="override solver_tol")

    val = sub.add_parser("validate", help="check a config without running it")
    val.add_argument("--config", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            report: ValidationReport = validate_config(cfg.fluid, cfg.grid, cfg.well)
            print(report)
            return EXIT_OK if report.ok else EXIT_CONFIG
        if args.tol is not None:
            if not math.isfinite(args.tol):
                raise ConfigError("--tol must be finite")
            cfg = replace(cfg, solver_tol=args.tol)
        bundle = run_experiment(cfg, resolve_output_dir(cfg, args.out))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc} (residual={exc.residual:.3e})", file=sys.stderr)
        return EXIT_SOLVER
    print(bundle.csv_path)
    print(bundle.json_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
