"""Command-line front end: run, sweep and calibrate subcommands.

Exit codes: 0 on success, 2 for usage or config validation problems, 3 for
unexpected internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import replace
from pathlib import Path

from ._version import __version__
from .config import (
    ConfigError,
    load_json,
    parse_calibrate_config,
    parse_run_config,
    parse_sweep_config,
)
from .engine import run, write_trajectory
from .plotting import render_phase_diagram
from .rng import GENERATOR_ID
from .sweep import (
    GridSampling,
    RandomSampling,
    calibrate,
    freeze_scenario_mean_total,
    run_sweep,
    scenario_by_name,
    write_phase_dataset,
)

USAGE_ERROR = 2
INTERNAL_ERROR = 3


def _parse_checkpoints(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}")
    return values


def _linspace(lo: float, hi: float, n: int) -> tuple[float, ...]:
    if n == 1:
        return (lo,)
    return tuple(lo + i * (hi - lo) / (n - 1) for i in range(n))


def _parse_grid(text: str) -> GridSampling:
    """Grid spec 'A0LO:A0HI:N,BLO:BHI:M' with inclusive endpoints."""
    try:
        a0_part, b_part = text.split(",")
        a0_lo, a0_hi, a0_n = a0_part.split(":")
        b_lo, b_hi, b_n = b_part.split(":")
        return GridSampling(
            _linspace(float(a0_lo), float(a0_hi), int(a0_n)),
            _linspace(float(b_lo), float(b_hi), int(b_n)),
        )
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(
            f"bad grid spec {text!r}; expected 'A0LO:A0HI:N,BLO:BHI:M'"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predcomp",
        description="Simulate a self-governing prediction competition.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation and write its trajectory")
    p_run.add_argument("--config", required=True, help="JSON config path")
    p_run.add_argument("--seed", type=int, help="override the config seed")
    p_run.add_argument("--out", default="out", help="output directory")
    p_run.add_argument(
        "--checkpoints", type=_parse_checkpoints, help="snapshot steps, e.g. 1,10,100"
    )

    p_sweep = sub.add_parser("sweep", help="sweep the (a0, b) plane")
    p_sweep.add_argument("--config", required=True, help="JSON config path")
    p_sweep.add_argument("--seed", type=int, help="override the master seed")
    p_sweep.add_argument("--out", default="out", help="output directory")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel workers")
    p_sweep.add_argument("--samples", type=int, help="override the random sample count")
    p_sweep.add_argument(
        "--grid", type=_parse_grid, help="grid sampling 'A0LO:A0HI:N,BLO:BHI:M'"
    )
    p_sweep.add_argument("--scenario", help="override the initial-belief scenario")
    p_sweep.add_argument(
        "--checkpoints", type=_parse_checkpoints, help="snapshot steps, e.g. 1,10,100"
    )

    p_cal = sub.add_parser(
        "calibrate", help="estimate the affinity threshold and exit threshold"
    )
    p_cal.add_argument("--config", required=True, help="JSON config path")
    p_cal.add_argument("--questions", type=int, help="override the question count")
    p_cal.add_argument(
        "--scenario",
        help="estimate the exit threshold from this scenario only",
    )
    p_cal.add_argument("--out", help="also write calibration.json here")

    return parser


def _out_dir(path_text: str) -> Path:
    out = Path(path_text)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args: argparse.Namespace) -> int:
    cfg = parse_run_config(load_json(args.config))
    params = cfg.params
    if args.seed is not None:
        params = replace(params, seed=args.seed)
    checkpoints = args.checkpoints or cfg.checkpoints
    trajectory = run(params, checkpoints)
    out = _out_dir(args.out)
    path = write_trajectory(trajectory, out / "trajectory.tsv")
    print(f"wrote {path} ({len(trajectory.records)} questions, "
          f"halted_by_stability={trajectory.halted_by_stability})")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = parse_sweep_config(load_json(args.config))
    if args.seed is not None:
        spec = replace(spec, master_seed=args.seed)
    if args.grid is not None:
        spec = replace(spec, sampling=args.grid)
    if args.samples is not None:
        if not isinstance(spec.sampling, RandomSampling):
            raise ConfigError("--samples applies only to random sampling")
        spec = replace(spec, sampling=replace(spec.sampling, count=args.samples))
    if args.scenario is not None:
        try:
            scenario_by_name(args.scenario)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from exc
        spec = replace(spec, scenario=args.scenario)
    if args.checkpoints is not None:
        spec = replace(spec, checkpoints=args.checkpoints)
    points = run_sweep(spec, workers=max(1, args.workers))
    out = _out_dir(args.out)
    csv_path, meta_path = write_phase_dataset(
        points, spec, out / "phase.csv", out / "phase_meta.json"
    )
    svg_path = render_phase_diagram(
        points, spec.checkpoints, out / "phase.svg", title=spec.scenario
    )
    print(f"wrote {csv_path}, {meta_path} and {svg_path} ({len(points)} samples)")
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = parse_calibrate_config(load_json(args.config))
    n_questions = args.questions if args.questions is not None else cfg.n_questions
    if n_questions < 1:
        raise ConfigError("--questions must be positive")
    note = "" if n_questions >= 1000 else "  (few questions; high-variance estimate)"
    results: dict[str, float] = {}
    if args.scenario is not None:
        try:
            scenario = scenario_by_name(args.scenario)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from exc
        mean_total = freeze_scenario_mean_total(cfg.base_params, scenario, n_questions)
        results["reward_threshold"] = 2.0 * mean_total
        print(f"scenario {scenario.name}: mean total reward {mean_total:.6g}{note}")
        print(f"recommended reward_threshold: {results['reward_threshold']:.6g}")
        print("affinity_threshold_reward not recomputed (needs the split layout)")
    else:
        r0, r_threshold = calibrate(cfg.base_params, n_questions)
        results["affinity_threshold_reward"] = r0
        results["reward_threshold"] = r_threshold
        print(f"recommended affinity_threshold_reward (r0): {r0:.6g}{note}")
        print(f"recommended reward_threshold: {r_threshold:.6g}{note}")
    if args.out:
        out = _out_dir(args.out)
        payload = {
            "artifact_version": __version__,
            "generator": GENERATOR_ID,
            "n_questions": n_questions,
            "seed": cfg.base_params.seed,
            "estimates": results,
        }
        path = out / "calibration.json"
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "sweep": cmd_sweep, "calibrate": cmd_calibrate}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception:
        traceback.print_exc()
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
