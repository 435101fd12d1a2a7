"""Command line front end: run simulations, compare diagnostics, plot series.

Subcommands:
  run      integrate a scenario and write diagnostics CSV + manifest (+ snapshots)
  compare  align two diagnostics CSVs and report per-invariant deviations
  plot     render a quantity from a diagnostics CSV as an SVG

Configuration can come from a key=value file (--config) and/or flags; flags
win.  The diagnostics CSV is written with full float precision so reruns of
the same configuration are bit-identical.
"""

from __future__ import annotations

import argparse
import os
import struct
import sys

import numpy as np

from . import __version__
from .diagnostics import INVARIANT_NAMES
from .fields import NeutralityError
from .grid import ConfigurationError, DistributionField, PhaseSpaceGrid
from .scenarios import (FilterSettings, SCENARIOS, ScenarioConfig,
                        initial_condition, make_echo_event, make_filter_hook,
                        scenario)
from .stepping import run as run_integrator

CSV_HEADER = "t,mass,current,kinetic,electric,total_energy,entropy,l1,l2,min_value"

SNAPSHOT_MAGIC = b"VLSV1"
_LAYOUT_CODES = {"dg_nodes": 0, "equidistant": 1}

THREADS_ENV = "VPSIM_THREADS"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def write_diagnostics_csv(path: str, records) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(",".join(f"{x:.17g}" for x in r.as_tuple()) + "\n")


def read_diagnostics_csv(path: str) -> dict[str, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.size == 0:
        raise ValueError(f"{path} holds no records")
    data = np.atleast_1d(data)
    return {name: np.asarray(data[name], dtype=float) for name in data.dtype.names}


def write_snapshot(path: str, f: DistributionField) -> None:
    """Self-describing binary snapshot: magic, dims, layout code, row-major float64.

    All integers and floats little-endian.  A .csv fallback with the same
    matrix is written next to it.
    """
    rows, cols = f.values.shape
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<III", rows, cols, _LAYOUT_CODES[f.layout]))
        fh.write(f.values.astype("<f8").tobytes(order="C"))
    np.savetxt(path + ".csv", f.values, delimiter=",", fmt="%.17g")


def read_snapshot(path: str) -> tuple[np.ndarray, str]:
    with open(path, "rb") as fh:
        magic = fh.read(5)
        if magic != SNAPSHOT_MAGIC:
            raise ValueError(f"{path} is not a snapshot file (magic {magic!r})")
        rows, cols, layout_code = struct.unpack("<III", fh.read(12))
        values = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8").reshape(rows, cols)
    layout = {v: k for k, v in _LAYOUT_CODES.items()}[layout_code]
    return values.copy(), layout


def _parse_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key = value, got {raw!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vpsim", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"vpsim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="run a scenario")
    pr.add_argument("--config", help="key = value configuration file (flags win)")
    pr.add_argument("--scenario", help=f"one of: {', '.join(sorted(SCENARIOS))}")
    pr.add_argument("--backend", choices=("dg", "spline"))
    pr.add_argument("--degree", type=int, help="dG polynomial degree (both dimensions)")
    pr.add_argument("--degree-x", type=int, dest="degree_x")
    pr.add_argument("--degree-v", type=int, dest="degree_v")
    pr.add_argument("--cells", type=int, help="dG cells per dimension")
    pr.add_argument("--cells-x", type=int, dest="cells_x")
    pr.add_argument("--cells-v", type=int, dest="cells_v")
    pr.add_argument("--points", type=int, help="spline points per dimension")
    pr.add_argument("--points-x", type=int, dest="points_x")
    pr.add_argument("--points-v", type=int, dest="points_v")
    pr.add_argument("--tau", type=float)
    pr.add_argument("--T", type=float, dest="t_final")
    pr.add_argument("--scheme", choices=("lie", "strang"))
    pr.add_argument("--record-every", type=int, dest="record_every")
    pr.add_argument("--filter-eta", type=float, dest="filter_eta")
    pr.add_argument("--filter-cadence", type=int, dest="filter_cadence")
    pr.add_argument("--snapshot-times", dest="snapshot_times",
                    help="comma-separated times at which to dump f")
    pr.add_argument("--threads", type=int)
    pr.add_argument("--out", help="output directory (default: .)")

    pc = sub.add_parser("compare", help="compare two diagnostics CSVs")
    pc.add_argument("csv_a")
    pc.add_argument("csv_b")

    pp = sub.add_parser("plot", help="plot a quantity from a diagnostics CSV")
    pp.add_argument("csv")
    pp.add_argument("--quantity", default="electric",
                    help="electric, or an invariant name for its error series "
                         f"({', '.join(INVARIANT_NAMES[:-1])})")
    pp.add_argument("--out", help="output SVG path (default: <csv>.<quantity>.svg)")
    return p


_RUN_DEFAULTS = dict(scenario=None, backend="dg", degree=3, degree_x=None, degree_v=None,
                     cells=32, cells_x=None, cells_v=None, points=128, points_x=None,
                     points_v=None, tau=0.1, t_final=100.0, scheme="strang",
                     record_every=1, filter_eta=None, filter_cadence=1,
                     snapshot_times=None, threads=None, out=".")

_INT_KEYS = {"degree", "degree_x", "degree_v", "cells", "cells_x", "cells_v",
             "points", "points_x", "points_v", "record_every", "filter_cadence",
             "threads"}
_FLOAT_KEYS = {"tau", "t_final", "filter_eta", "alpha", "beta", "gamma", "k",
               "x_min", "x_max", "v_min", "v_max"}


def _resolve_run_config(args: argparse.Namespace) -> dict:
    cfg = dict(_RUN_DEFAULTS)
    scenario_overrides: dict = {}
    if args.config:
        for key, val in _parse_config_file(args.config).items():
            key = key.replace("-", "_")
            if key == "T":
                key = "t_final"
            if key in ("alpha", "beta", "gamma", "k", "x_min", "x_max", "v_min", "v_max", "family"):
                scenario_overrides[key] = float(val) if key != "family" else val
                continue
            if key not in cfg:
                raise ConfigurationError(f"unknown config key {key!r}")
            if key in _INT_KEYS:
                cfg[key] = int(val)
            elif key in _FLOAT_KEYS:
                cfg[key] = float(val)
            else:
                cfg[key] = val
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["scenario_overrides"] = scenario_overrides
    if cfg["scenario"] is None:
        raise ConfigurationError("a scenario must be named (--scenario or config file)")
    if cfg["threads"] is None:
        cfg["threads"] = int(os.environ.get(THREADS_ENV, "1"))
    return cfg


def _make_grid(cfg: dict, scen: ScenarioConfig) -> PhaseSpaceGrid:
    x_span = (scen.x_min, scen.x_max)
    v_span = (scen.v_min, scen.v_max)
    if cfg["backend"] == "dg":
        deg_x = cfg["degree_x"] if cfg["degree_x"] is not None else cfg["degree"]
        deg_v = cfg["degree_v"] if cfg["degree_v"] is not None else cfg["degree"]
        nx = cfg["cells_x"] if cfg["cells_x"] is not None else cfg["cells"]
        nv = cfg["cells_v"] if cfg["cells_v"] is not None else cfg["cells"]
        return PhaseSpaceGrid.dg(x_span, v_span, nx, nv, deg_x, deg_v)
    nx = cfg["points_x"] if cfg["points_x"] is not None else cfg["points"]
    nv = cfg["points_v"] if cfg["points_v"] is not None else cfg["points"]
    return PhaseSpaceGrid.spline(x_span, v_span, nx, nv)


def _manifest_text(cfg: dict, scen: ScenarioConfig, grid: PhaseSpaceGrid) -> str:
    lines = [f"vpsim_version = {__version__}"]
    for key in sorted(k for k in cfg if k != "scenario_overrides"):
        lines.append(f"{key} = {cfg[key]}")
    for key, val in sorted(cfg["scenario_overrides"].items()):
        lines.append(f"scenario.{key} = {val}")
    lines.append(f"scenario.name = {scen.name}")
    lines.append(f"scenario.family = {scen.family}")
    lines.append(f"domain = [{scen.x_min}, {scen.x_max}] x [{scen.v_min}, {scen.v_max}]")
    lines.append(f"dof_per_dimension = {grid.n_dof_x} x {grid.n_dof_v}")
    return "\n".join(lines) + "\n"


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _resolve_run_config(args)
    scen = scenario(cfg["scenario"], **cfg["scenario_overrides"])
    grid = _make_grid(cfg, scen)
    print(f"vpsim run: scenario={scen.name} backend={cfg['backend']} "
          f"DoF/dim = {grid.n_dof_x} x {grid.n_dof_v}")
    f0 = initial_condition(scen, grid)

    events = []
    if scen.echo_kick is not None:
        events.append(make_echo_event(scen.echo_kick))
    per_step = None
    filter_cfg = scen.filter
    if cfg["filter_eta"] is not None:
        filter_cfg = FilterSettings(eta=cfg["filter_eta"], cadence=cfg["filter_cadence"])
    if filter_cfg is not None:
        per_step = make_filter_hook(filter_cfg)

    snap_times = []
    if cfg["snapshot_times"]:
        snap_times = sorted(float(s) for s in str(cfg["snapshot_times"]).split(","))

    os.makedirs(cfg["out"], exist_ok=True)

    def snapshot_event(time_point: float):
        def dump(f: DistributionField) -> DistributionField:
            write_snapshot(os.path.join(cfg["out"], f"snapshot_t{time_point:g}.bin"), f)
            return f
        return time_point, dump

    events.extend(snapshot_event(t) for t in snap_times)

    result = run_integrator(f0, cfg["tau"], cfg["t_final"], cfg["scheme"],
                            record_every=cfg["record_every"], events=events,
                            per_step=per_step)

    csv_path = os.path.join(cfg["out"], "diagnostics.csv")
    write_diagnostics_csv(csv_path, result.records)
    with open(os.path.join(cfg["out"], "manifest.txt"), "w") as fh:
        fh.write(_manifest_text(cfg, scen, grid))
    print(f"wrote {csv_path} ({len(result.records)} records)")
    return EXIT_OK


def compare_series(a: dict[str, np.ndarray], b: dict[str, np.ndarray]) -> dict:
    """Align two diagnostics series on common times; per-invariant deviation stats."""
    common, ia, ib = np.intersect1d(a["t"], b["t"], return_indices=True)
    if common.size == 0:
        raise ValueError("the runs share no sample times")
    report: dict = {"t": common, "n_common": int(common.size)}
    for name in INVARIANT_NAMES:
        va, vb = a[name][ia], b[name][ib]
        dev = np.abs(va - vb)
        scale = max(np.max(np.abs(va)), np.max(np.abs(vb)), 1e-30)
        drift_a = np.abs(va - va[0])
        drift_b = np.abs(vb - vb[0])
        report[name] = {
            "max_abs_deviation": float(dev.max()),
            "max_rel_deviation": float(dev.max() / scale),
            "final_drift_a": float(drift_a[-1]),
            "final_drift_b": float(drift_b[-1]),
            "max_drift_a": float(drift_a.max()),
            "max_drift_b": float(drift_b.max()),
        }
    return report


def cmd_compare(args: argparse.Namespace) -> int:
    a = read_diagnostics_csv(args.csv_a)
    b = read_diagnostics_csv(args.csv_b)
    report = compare_series(a, b)
    print(f"common sample times: {report['n_common']}")
    print(f"{'invariant':>14} {'max|A-B|':>12} {'rel':>10} {'driftA(max)':>12} {'driftB(max)':>12}")
    worst = ("", 0.0)
    for name in INVARIANT_NAMES:
        r = report[name]
        print(f"{name:>14} {r['max_abs_deviation']:12.4e} {r['max_rel_deviation']:10.2e} "
              f"{r['max_drift_a']:12.4e} {r['max_drift_b']:12.4e}")
        if r["max_rel_deviation"] > worst[1]:
            worst = (name, r["max_rel_deviation"])
    print(f"max deviation: {worst[0]} (relative {worst[1]:.3e})")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    data = read_diagnostics_csv(args.csv)
    if data["t"].size < 1:
        raise ValueError("empty diagnostics series")
    out = args.out or f"{args.csv}.{args.quantity}.svg"
    fig, ax = plt.subplots(figsize=(7, 4.5))
    t = data["t"]
    if args.quantity == "electric":
        ax.semilogy(t, np.maximum(data["electric"], 1e-300), lw=0.9)
        ax.set_ylabel("electric energy")
    else:
        if args.quantity not in data:
            raise ValueError(f"unknown quantity {args.quantity!r}")
        q = data[args.quantity]
        q0 = q[0]
        if args.quantity == "current" and abs(q0) < 1e-8 * max(1.0, abs(data["mass"][0])):
            err = np.abs(q - q0)
        else:
            err = np.abs(q - q0) / max(abs(q0), 1e-30)
        ax.semilogy(t, np.maximum(err, 1e-18), lw=0.9)
        ax.set_ylabel(f"{args.quantity} error")
    ax.set_xlabel("t")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "compare":
            return cmd_compare(args)
        return cmd_plot(args)
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NeutralityError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
