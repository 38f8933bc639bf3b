"""Command line interface: run experiments, write CSV data and JSON manifests.

Everything here is deterministic and seed-free: the same config produces
byte-identical CSV files and manifests on one machine (the created_at
timestamp is the only field that varies).  Floats are serialized with 17
significant digits so text round-trips are lossless.

Exit codes: 0 success, 2 config/input error, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import (
    ConvergenceStudy,
    ExperimentSetup,
    PanelResult,
    convergence_study,
    epsilon_sweep,
    reference_density,
    simulate_panel,
)
from .analytic import density_at, wavefunction_at
from .madelung import bohm_velocity, hydro_fields
from .solver import SCHEME_ID, SolverFailure
from .wavefield import ComplexField, SimParams, density, make_grid

SCHEMA_VERSION = 1
TOOL_NAME = "qctransition"

# Fig. 1-style ladder: classical, three intermediates, standard quantum.
SWEEP_EPSILONS = (0.0, 0.02, 0.05, 0.2, 0.6, 1.0)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_IO = 4

OUTPUT_ROOT_ENV = "QCTRANSITION_OUTPUT_ROOT"


class ConfigError(ValueError):
    """Invalid configuration or malformed input data."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a run; everything needed to reproduce it."""

    epsilons: tuple[float, ...] = (1.0,)
    d_over_sigma: float = 3.0
    t_final_units: float = 20.0
    grid_extent_over_sigma: float = 80.0
    grid_points: int = 4096
    dt_safety: float = 0.5
    amp_floor_rel: float = 1e-8
    snapshot_times: Optional[tuple[float, ...]] = None
    output_dir: str = "out"
    workers: int = 1

    def setup(self) -> ExperimentSetup:
        return ExperimentSetup(
            d_over_sigma=self.d_over_sigma,
            sigma=1.0,
            mass=1.0,
            hbar=1.0,
            extent_over_sigma=self.grid_extent_over_sigma,
            n_points=self.grid_points,
            t_final=self.t_final_units,
            dt_safety=self.dt_safety,
            amp_floor_rel=self.amp_floor_rel,
        )


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not items:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}")
    try:
        return tuple(float(tok) for tok in items)
    except ValueError as exc:
        raise ConfigError(f"bad number in list {text!r}: {exc}") from None


_FIELD_PARSERS = {
    "epsilons": _parse_float_list,
    "d_over_sigma": float,
    "t_final_units": float,
    "grid_extent_over_sigma": float,
    "grid_points": int,
    "dt_safety": float,
    "amp_floor_rel": float,
    "snapshot_times": _parse_float_list,
    "output_dir": str,
    "workers": int,
}


def parse_config_file(path: str | Path) -> dict[str, object]:
    """Read 'key = value' lines; '#' starts a comment; blank lines ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"{path}, line {lineno}: expected 'key = value'")
        if key == "epsilon":
            key = "epsilons"
        if key not in _FIELD_PARSERS:
            raise ConfigError(f"{path}, line {lineno}: unknown config key {key!r}")
        try:
            values[key] = _FIELD_PARSERS[key](value)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{path}, line {lineno}: {exc}") from None
    return values


def _resolve_output_dir(output_dir: str) -> str:
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root and not os.path.isabs(output_dir):
        return os.path.join(root, output_dir)
    return output_dir


def _validated(config: ExperimentConfig) -> ExperimentConfig:
    """Cheap guards before any integration starts."""
    for e in config.epsilons:
        if not 0.0 <= e <= 1.0:
            raise ConfigError(f"epsilon must lie in [0, 1], got {e:g}")
    if config.grid_points < 3:
        raise ConfigError("grid_points must be at least 3")
    if config.t_final_units < 0.0:
        raise ConfigError("t_final_units must be nonnegative")
    dx = 2.0 * config.grid_extent_over_sigma / (config.grid_points - 1)
    if dx > 0.5:
        need = math.ceil(4.0 * config.grid_extent_over_sigma) + 1
        raise ConfigError(
            f"grid too narrow: dx = {dx:g} sigma cannot resolve unit-width packets; "
            f"need dx <= sigma/2 (grid_points >= {need} at this extent)"
        )
    # packet tails must be negligible at the boundary
    if config.grid_extent_over_sigma < config.d_over_sigma + 9.6:
        raise ConfigError(
            "grid too narrow: extent must reach |x| >= "
            f"{config.d_over_sigma + 9.6:g} sigma (d + 9.6 sigma)"
        )
    return replace(config, output_dir=_resolve_output_dir(config.output_dir))


def _created_at() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _tool_block() -> dict[str, str]:
    return {"name": TOOL_NAME, "version": __version__, "scheme": SCHEME_ID}


def _config_block(config: ExperimentConfig) -> dict[str, object]:
    block = asdict(config)
    block["epsilons"] = list(config.epsilons)
    if config.snapshot_times is not None:
        block["snapshot_times"] = list(config.snapshot_times)
    return block


def _write_manifest(path: Path, payload: dict[str, object]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")


def config_from_manifest(path: str | Path) -> tuple[str, ExperimentConfig, dict]:
    """Rebuild (command, config, results) from a manifest: the closure check."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from None
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"{path}: unsupported schema_version {data.get('schema_version')!r}"
        )
    raw = data.get("config")
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: manifest has no config block")
    kwargs: dict[str, object] = {}
    for f in fields(ExperimentConfig):
        if f.name not in raw:
            raise ConfigError(f"{path}: config block missing {f.name!r}")
        value = raw[f.name]
        if f.name in ("epsilons",):
            value = tuple(float(v) for v in value)
        elif f.name == "snapshot_times" and value is not None:
            value = tuple(float(v) for v in value)
        kwargs[f.name] = value
    return str(data.get("command", "")), ExperimentConfig(**kwargs), data


def _write_rows(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    n = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def _snapshot_name(t: float) -> str:
    return f"snapshot_t{t:.6f}.csv"


def _run_report_block(panel: PanelResult) -> dict[str, object]:
    r = panel.report
    return {
        "epsilon": r.epsilon,
        # eps = 0 has no linear counterpart; error budgets degrade there
        "regime": "singular-classical" if r.epsilon == 0.0 else "standard",
        "time": r.time,
        "dt_used": r.dt_used,
        "steps_taken": r.steps_taken,
        "norm_drift_rel": r.norm_drift_rel,
        "linf_error_rel_peak": r.linf_error_rel_peak,
        "l2_error": r.l2_error,
        "visibility_sim": r.visibility_sim,
        "visibility_analytic": r.visibility_analytic,
        "max_classicality_term": panel.run.max_classicality_term,
    }


def _write_run_outputs(
    config: ExperimentConfig, panel: PanelResult, out: Path
) -> dict[str, object]:
    """Snapshot CSVs plus a single-run manifest for an already-computed panel."""
    setup = config.setup()
    tg_config = setup.two_gaussian(panel.epsilon)
    grid = setup.grid()
    out.mkdir(parents=True, exist_ok=True)
    snapshot_entries = []
    x = grid.x
    for t, field in panel.run.snapshots:
        sim = density(field, time=t, epsilon=panel.epsilon)
        ref = reference_density(tg_config, t, grid)
        name = _snapshot_name(t)
        _write_rows(
            out / name,
            ("x", "rho_sim", "rho_analytic", "re_psi", "im_psi"),
            (x, sim.rho, ref.rho, field.values.real, field.values.imag),
        )
        snapshot_entries.append({"time": t, "csv": name})
    results = _run_report_block(panel)
    results["snapshots"] = snapshot_entries
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "tool": _tool_block(),
        "created_at": _created_at(),
        "command": "simulate",
        "config": _config_block(replace(config, epsilons=(panel.epsilon,))),
        "results": results,
    }
    _write_manifest(out / "manifest.json", manifest)
    return results


def cmd_simulate(config: ExperimentConfig) -> int:
    if len(config.epsilons) != 1:
        raise ConfigError(
            f"simulate runs a single epsilon; got {len(config.epsilons)} "
            "(use the sweep command for lists)"
        )
    out = Path(config.output_dir)
    panel = simulate_panel(config.setup(), config.epsilons[0], config.snapshot_times)
    results = _write_run_outputs(config, panel, out)
    print(
        f"simulate eps={config.epsilons[0]:g}: {results['steps_taken']} steps, "
        f"norm drift {results['norm_drift_rel']:.3e}, "
        f"linf error {results['linf_error_rel_peak']:.3e} of peak -> {out}"
    )
    return EXIT_OK


def _dedup_sorted(eps_list: Sequence[float]) -> list[float]:
    seen: list[float] = []
    for e in sorted(float(v) for v in eps_list):
        if seen and e == seen[-1]:
            print(f"warning: duplicate epsilon {e:g} ignored", file=sys.stderr)
            continue
        seen.append(e)
    return seen


def cmd_sweep(config: ExperimentConfig) -> int:
    eps_list = _dedup_sorted(config.epsilons)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    setup = config.setup()
    items = epsilon_sweep(
        eps_list, setup, workers=config.workers, snapshot_times=config.snapshot_times
    )
    runs = []
    failed = False
    for item in items:
        run_dir = f"eps_{item.epsilon:g}"
        entry: dict[str, object] = {"epsilon": item.epsilon, "dir": run_dir}
        if item.ok:
            # serialize through the single-run writer for identical layout
            sub_config = replace(
                config, epsilons=(item.epsilon,), output_dir=str(out / run_dir)
            )
            results = _write_run_outputs(sub_config, item.panel, out / run_dir)
            final = results["snapshots"][-1]["csv"]
            entry.update(
                ok=True,
                error=None,
                manifest=f"{run_dir}/manifest.json",
                final_csv=f"{run_dir}/{final}",
                report={k: v for k, v in results.items() if k != "snapshots"},
            )
        else:
            failed = True
            entry.update(ok=False, error=item.error, manifest=None, final_csv=None, report=None)
            print(f"error: eps={item.epsilon:g} failed: {item.error}", file=sys.stderr)
        runs.append(entry)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "tool": _tool_block(),
        "created_at": _created_at(),
        "command": "sweep",
        "config": _config_block(replace(config, epsilons=tuple(eps_list))),
        "runs": runs,
    }
    _write_manifest(out / "sweep_manifest.json", manifest)
    print(f"sweep: {sum(1 for r in runs if r['ok'])}/{len(runs)} runs ok -> {out}")
    return EXIT_NUMERICS if failed else EXIT_OK


def cmd_analytic(config: ExperimentConfig, times: tuple[float, ...]) -> int:
    """Closed-form densities only; no integration."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    setup = config.setup()
    grid = setup.grid()
    x = grid.x
    files = []
    for epsilon in _dedup_sorted(config.epsilons):
        tg_config = setup.two_gaussian(epsilon)
        for t in times:
            prof = density_at(tg_config, t, grid)
            psi = wavefunction_at(tg_config, t, grid)
            name = f"analytic_eps{epsilon:g}_t{t:.6f}.csv"
            _write_rows(
                out / name,
                ("x", "rho_analytic", "re_psi", "im_psi"),
                (x, prof.rho, psi.values.real, psi.values.imag),
            )
            files.append({"epsilon": epsilon, "time": t, "csv": name})
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "tool": _tool_block(),
        "created_at": _created_at(),
        "command": "analytic",
        "config": _config_block(config),
        "results": {"times": list(times), "files": files},
    }
    _write_manifest(out / "manifest.json", manifest)
    print(f"analytic: wrote {len(files)} profiles -> {out}")
    return EXIT_OK


def read_field_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read columns x, re_psi, im_psi; extra columns are ignored.

    Parse failures carry the 1-based line number.
    """
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ConfigError(f"{path}, line 1: empty file (expected a header row)")
    header = [h.strip() for h in rows[0]]
    try:
        idx = tuple(header.index(name) for name in ("x", "re_psi", "im_psi"))
    except ValueError:
        missing = [n for n in ("x", "re_psi", "im_psi") if n not in header]
        raise ConfigError(
            f"{path}, line 1: missing column(s) {', '.join(missing)}"
        ) from None
    xs, res, ims = [], [], []
    need = max(idx) + 1
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) < need:
            raise ConfigError(
                f"{path}, line {lineno}: expected at least {need} fields, got {len(row)}"
            )
        try:
            xs.append(float(row[idx[0]]))
            res.append(float(row[idx[1]]))
            ims.append(float(row[idx[2]]))
        except ValueError as exc:
            raise ConfigError(f"{path}, line {lineno}: {exc}") from None
    if not xs:
        raise ConfigError(f"{path}, line 2: no data rows")
    x = np.asarray(xs, dtype=np.float64)
    psi = np.asarray(res, dtype=np.float64) + 1j * np.asarray(ims, dtype=np.float64)
    return x, psi


def cmd_decompose(config: ExperimentConfig, input_csv: str, output_csv: Optional[str]) -> int:
    """Split a stored field into amplitude, action and hydrodynamic columns."""
    x, values = read_field_csv(input_csv)
    steps = np.diff(x)
    if len(x) < 3:
        raise ConfigError("need at least 3 samples to form derivatives")
    if not np.all(steps > 0):
        raise ConfigError("x column must be strictly increasing")
    dx0 = steps[0]
    if np.max(np.abs(steps - dx0)) > 1e-9 * abs(dx0):
        raise ConfigError("x column must be uniformly spaced")
    grid = make_grid(float(x[0]), float(x[-1]), len(x))
    psi = ComplexField(grid=grid, values=values)
    params = SimParams(
        epsilon=config.epsilons[0], amp_floor_rel=config.amp_floor_rel
    )
    fieldset = hydro_fields(psi, params)
    velocity = bohm_velocity(fieldset.polar, params)
    if output_csv is None:
        out_dir = Path(config.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        out_path = out_dir / "decomposed.csv"
    else:
        out_path = Path(output_csv)
        if out_path.parent != Path("."):
            out_path.parent.mkdir(parents=True, exist_ok=True)
    _write_rows(
        out_path,
        ("x", "amplitude", "action", "quantum_potential", "current", "bohm_velocity"),
        (
            grid.x,
            fieldset.polar.amplitude,
            fieldset.polar.action,
            fieldset.quantum_potential,
            fieldset.current,
            velocity,
        ),
    )
    print(f"decompose: {input_csv} -> {out_path}")
    return EXIT_OK


def cmd_convergence(config: ExperimentConfig, epsilon: float, levels: int) -> int:
    study = convergence_study(config.setup(), epsilon=epsilon, levels=levels)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_convergence_csv(out / "convergence.csv", study)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "tool": _tool_block(),
        "created_at": _created_at(),
        "command": "convergence",
        "config": _config_block(config),
        "results": {
            "epsilon": epsilon,
            "levels": [asdict(lv) for lv in study.levels],
            "orders": list(study.orders),
            "monotone": study.monotone,
        },
    }
    _write_manifest(out / "manifest.json", manifest)
    orders = ", ".join(f"{p:.3f}" for p in study.orders)
    print(f"convergence: orders [{orders}], monotone={study.monotone} -> {out}")
    return EXIT_OK


def _write_convergence_csv(path: Path, study: ConvergenceStudy) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("n_points,dx,dt_used,linf_error_rel_peak,observed_order\n")
        for i, lv in enumerate(study.levels):
            order = "" if i == 0 else _fmt(study.orders[i - 1])
            fh.write(
                f"{lv.n_points},{_fmt(lv.dx)},{_fmt(lv.dt_used)},"
                f"{_fmt(lv.linf_error_rel_peak)},{order}\n"
            )


def replay_manifest(path: str | Path, output_dir: str | Path) -> int:
    """Re-run the experiment a manifest describes, writing into output_dir."""
    command, config, data = config_from_manifest(path)
    config = replace(config, output_dir=str(output_dir))
    if command == "simulate":
        return cmd_simulate(config)
    if command == "sweep":
        return cmd_sweep(config)
    if command == "analytic":
        times = tuple(float(t) for t in data["results"]["times"])
        return cmd_analytic(config, times)
    raise ConfigError(f"manifest command {command!r} cannot be replayed")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key = value config file")
    parser.add_argument("--d-over-sigma", type=float, dest="d_over_sigma")
    parser.add_argument("--t-final-units", type=float, dest="t_final_units")
    parser.add_argument(
        "--grid-extent-over-sigma", type=float, dest="grid_extent_over_sigma"
    )
    parser.add_argument("--grid-points", type=int, dest="grid_points")
    parser.add_argument("--dt-safety", type=float, dest="dt_safety")
    parser.add_argument("--amp-floor-rel", type=float, dest="amp_floor_rel")
    parser.add_argument(
        "--snapshot-times", dest="snapshot_times", metavar="T1,T2,...",
        help="comma-separated times to record (default: final time only)",
    )
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument("--workers", type=int, dest="workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="classical-to-quantum transition experiments on a 1D grid",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one epsilon and write CSVs")
    _add_common(p)
    p.add_argument("--epsilon", type=float, help="degree of quantumness in [0, 1]")

    p = sub.add_parser("sweep", help="run an epsilon ladder and a combined manifest")
    _add_common(p)
    p.add_argument(
        "--epsilons", metavar="E1,E2,...",
        help=f"comma-separated list (default {','.join(str(e) for e in SWEEP_EPSILONS)})",
    )

    p = sub.add_parser("analytic", help="write closed-form densities, no integration")
    _add_common(p)
    p.add_argument("--epsilons", metavar="E1,E2,...")
    p.add_argument("--times", metavar="T1,T2,...", help="default: final time")

    p = sub.add_parser("decompose", help="amplitude/action/potential columns from a field CSV")
    _add_common(p)
    p.add_argument("input_csv")
    p.add_argument("--epsilon", type=float, help="epsilon used for the floor and units")
    p.add_argument("-o", "--output", dest="output_csv", help="output CSV path")

    p = sub.add_parser("convergence", help="dx-halving refinement study")
    _add_common(p)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--levels", type=int, default=3)

    p = sub.add_parser("replay", help="re-run the experiment recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--output-dir", dest="output_dir", required=True)
    return parser


def merge_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then config file entries, then explicit flags."""
    values: dict[str, object] = {}
    if getattr(args, "config", None):
        values.update(parse_config_file(args.config))
    for f in fields(ExperimentConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            if f.name in ("epsilons", "snapshot_times") and isinstance(flag, str):
                flag = _parse_float_list(flag)
            values[f.name] = flag
    epsilon = getattr(args, "epsilon", None)
    if epsilon is not None:
        values["epsilons"] = (float(epsilon),)
    if "epsilons" not in values:
        if args.command == "sweep":
            values["epsilons"] = SWEEP_EPSILONS
        else:
            values["epsilons"] = (1.0,)
    try:
        config = ExperimentConfig(**{**_defaults(), **values})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return _validated(config)


def _defaults() -> dict[str, object]:
    return {f.name: f.default for f in fields(ExperimentConfig)}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            return replay_manifest(args.manifest, args.output_dir)
        config = merge_config(args)
        if args.command == "simulate":
            return cmd_simulate(config)
        if args.command == "sweep":
            return cmd_sweep(config)
        if args.command == "analytic":
            times = getattr(args, "times", None)
            parsed = _parse_float_list(times) if times else (config.t_final_units,)
            for t in parsed:
                if t < 0.0:
                    raise ConfigError(f"times must be nonnegative, got {t:g}")
            return cmd_analytic(config, parsed)
        if args.command == "decompose":
            return cmd_decompose(config, args.input_csv, args.output_csv)
        if args.command == "convergence":
            eps = args.epsilon if args.epsilon is not None else 1.0
            return cmd_convergence(config, eps, args.levels)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
