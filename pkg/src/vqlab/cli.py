"""Experiment runner: one config file, one subcommand, reproducible outputs.

Subcommands: train, energy-scan, tube-scan, gradient-check, invariance,
counterexample.  Each writes its CSV/JSON outputs plus a run manifest into
the output directory.  Exit codes: 0 success, 2 config error, 3 runtime
error.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__
from . import config as cf
from . import counterexample as cx
from . import energy as en
from . import training as tr
from .config import ConfigError
from .geometry import perturbation_bound
from .report import emit_report, write_json_atomic
from .streams import SeededStream


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("train", "energy-scan", "tube-scan", "gradient-check", "invariance", "counterexample"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON experiment config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--overwrite", action="store_true", help="replace existing output files")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--threads", type=int, default=None,
                       help="reserved; estimators are vectorized in-process")
    return parser


def _out_path(args, name: str, created: list[str]) -> str:
    import os

    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, name)
    if os.path.exists(path) and not args.overwrite:
        raise FileExistsError(f"{path} exists; pass --overwrite to replace it")
    created.append(path)
    return path


def _cmd_train(cfg, seed, args, created):
    density = cf.parse_density(cf._require(cfg, "density", "config"))
    w0 = cf.parse_prototypes(cf._require(cfg, "prototypes", "config"), density, seed)
    spec = cf.parse_neighborhood(cf._require(cfg, "neighborhood", "config"))
    schedule = cf.parse_schedule(cf._require(cfg, "schedule", "config"))
    iterations = cf._integer(cf._require(cfg, "iterations", "config"), "iterations")
    snapshot_every = cf._integer(cfg.get("snapshot_every", 0), "snapshot_every")
    records = tr.run(density, w0, spec, schedule, iterations,
                     SeededStream(seed), snapshot_every=snapshot_every)
    emit_report(tr.records_to_rows(records), "csv",
                _out_path(args, "trajectory.csv", created), config_hash=cf.config_hash(cfg))


def _cmd_energy_scan(cfg, seed, args, created):
    density = cf.parse_density(cf._require(cfg, "density", "config"))
    w = cf.parse_prototypes(cf._require(cfg, "prototypes", "config"), density, seed)
    spec = cf.parse_neighborhood(cf._require(cfg, "neighborhood", "config"))
    integ = cf.parse_integrator(cf._require(cfg, "integrator", "config"), seed)
    etas = cf.parse_etas(cf._require(cfg, "etas", "config"))
    rows = [
        {
            "eta": r.eta,
            "theta": r.theta,
            "energy": r.energy,
            "cellular_energy": r.cellular_energy,
            "gap": r.gap,
            "tube_mass": r.tube_mass,
            "stderr_energy": r.stderr_energy,
            "stderr_gap": r.stderr_gap,
        }
        for r in en.energy_gap_scan(density, w, spec, etas, integ)
    ]
    emit_report(rows, "csv", _out_path(args, "energy_scan.csv", created),
                config_hash=cf.config_hash(cfg))


def _cmd_tube_scan(cfg, seed, args, created):
    density = cf.parse_density(cf._require(cfg, "density", "config"))
    w = cf.parse_prototypes(cf._require(cfg, "prototypes", "config"), density, seed)
    integ = cf.parse_integrator(cf._require(cfg, "integrator", "config"), seed)
    etas = cf.parse_etas(cf._require(cfg, "etas", "config"))
    rows = []
    for eta in etas:
        cp = perturbation_bound(eta, density.diameter)
        rows.append({"eta": cp.eta, "theta": cp.theta,
                     "tube_mass": en.tube_mass(density, w, cp, integ)})
    emit_report(rows, "csv", _out_path(args, "tube_scan.csv", created),
                config_hash=cf.config_hash(cfg))


def _cmd_gradient_check(cfg, seed, args, created):
    density = cf.parse_density(cf._require(cfg, "density", "config"))
    w = cf.parse_prototypes(cf._require(cfg, "prototypes", "config"), density, seed)
    spec = cf.parse_neighborhood(cf._require(cfg, "neighborhood", "config"))
    integ = cf.parse_integrator(cf._require(cfg, "integrator", "config"), seed)
    eta = cf._number(cf._require(cfg, "eta", "config"), "eta")
    j = cf._integer(cf._require(cfg, "j", "config"), "j")
    cp = perturbation_bound(eta, density.diameter)
    h = cf._number(cfg.get("h", cp.nu / 2), "h")
    analytic = en.analytic_gradient(density, w, spec, j, integ, cp=cp)
    fd = en.finite_diff_gradient(density, w, spec, cp, j, h, integ)
    denom = max(float(np.linalg.norm(analytic)), 1e-300)
    write_json_atomic(
        {
            "analytic": analytic.tolist(),
            "finite_diff": fd.tolist(),
            "rel_error": float(np.linalg.norm(fd - analytic)) / denom,
            "eta": cp.eta,
            "nu": cp.nu,
            "h": h,
            "j": j,
            "config_hash": cf.config_hash(cfg),
        },
        _out_path(args, "gradient_check.json", created),
    )


def _cmd_invariance(cfg, seed, args, created):
    density = cf.parse_density(cf._require(cfg, "density", "config"))
    w = cf.parse_prototypes(cf._require(cfg, "prototypes", "config"), density, seed)
    eta = cf._number(cf._require(cfg, "eta", "config"), "eta")
    trials = cf._integer(cf._require(cfg, "trials", "config"), "trials")
    cp = perturbation_bound(eta, density.diameter)
    stream = SeededStream(seed, stream_id=3)
    violations = en.invariance_probe(density, w, cp, trials, stream)
    adversarial = en.adversarial_probe(density, w, cp, stream.substream(0))
    write_json_atomic(
        {
            "trials": trials,
            "violations": violations,
            "adversarial_violations": adversarial,
            "eta": cp.eta,
            "theta": cp.theta,
            "nu": cp.nu,
            "config_hash": cf.config_hash(cfg),
        },
        _out_path(args, "invariance.json", created),
    )


def _cmd_counterexample(cfg, seed, args, created):
    ce = cf.parse_counterexample(cf._require(cfg, "counterexample", "config"))
    grid = cf._require(cfg, "zeta1_grid", "config")
    if not isinstance(grid, list) or not grid:
        raise ConfigError("zeta1_grid", "expected a nonempty list")
    grid = [cf._number(x, f"zeta1_grid[{i}]") for i, x in enumerate(grid)]
    panels = cf._integer(cfg.get("panels", 200_000), "panels")
    emit_report(cx.scan_rows(ce, grid, panels), "csv",
                _out_path(args, "counterexample.csv", created),
                config_hash=cf.config_hash(cfg))
    sb = cx.slope_break(ce, grid, panels=panels)
    write_json_atomic(
        {
            "l1_hat": sb.l1_hat,
            "l2_hat": sb.l2_hat,
            "l1_closed": sb.l1_closed,
            "l2_closed": sb.l2_closed,
            "stderr": sb.stderr,
            "distinct": sb.distinct,
            "break_at": sb.break_at,
            "config_hash": cf.config_hash(cfg),
        },
        _out_path(args, "verdict.json", created),
    )


_HANDLERS = {
    "train": _cmd_train,
    "energy-scan": _cmd_energy_scan,
    "tube-scan": _cmd_tube_scan,
    "gradient-check": _cmd_gradient_check,
    "invariance": _cmd_invariance,
    "counterexample": _cmd_counterexample,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.time()
    created: list[str] = []
    try:
        cfg = cf.load_config(args.config)
        if "command" in cfg and cfg["command"] != args.command:
            raise ConfigError("command", f"config is for {cfg['command']!r}, not {args.command!r}")
        seed = cf.get_seed(cfg, args.seed)
        _HANDLERS[args.command](cfg, seed, args, created)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    import os

    manifest = {
        "command": args.command,
        "config_hash": cf.config_hash(cfg),
        "tool_version": __version__,
        "duration_seconds": time.time() - started,
        "outputs": [os.path.basename(p) for p in created],
    }
    write_json_atomic(manifest, os.path.join(args.out, "manifest.json"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
