"""Monte Carlo harness over the (a0, b) plane.

Every sample derives its own seeds from the master seed and its index
(via rng.child_seed; even child index for the parameter draw, odd for the
simulation), so the emitted list is identical whether the sweep runs on
one worker or many.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from pathlib import Path

from ._version import __version__
from .engine import DEFAULT_CHECKPOINTS, SimulationParams, Trajectory, freeze_beliefs_run, run
from .rng import GENERATOR_ID, child_seed

DEFAULT_A0_RANGE = (0.0, 0.3)
DEFAULT_B_RANGE = (0.0, 1.2)


@dataclass(frozen=True)
class Scenario:
    """Named initial-belief layout, e.g. 10 experts at -4 and 10 at +4."""

    name: str
    layout: tuple[tuple[int, int], ...]  # (count, belief level)

    def beliefs(self) -> tuple[int, ...]:
        out: list[int] = []
        for count, level in self.layout:
            out.extend([level] * count)
        return tuple(out)

    @property
    def n_experts(self) -> int:
        return sum(count for count, _ in self.layout)


def builtin_scenarios() -> list[Scenario]:
    """The five stock 20-expert layouts."""
    return [
        Scenario("split-10-10", ((10, -4), (10, 4))),
        Scenario("contrarian-1", ((19, -4), (1, 4))),
        Scenario("unanimous-neg", ((20, -4),)),
        Scenario("seed-2", ((18, -4), (2, 4))),
        Scenario("seed-3", ((17, -4), (3, 4))),
    ]


def scenario_by_name(name: str) -> Scenario:
    for scenario in builtin_scenarios():
        if scenario.name == name:
            return scenario
    known = ", ".join(s.name for s in builtin_scenarios())
    raise KeyError(f"unknown scenario {name!r}; known scenarios: {known}")


@dataclass(frozen=True)
class RandomSampling:
    """Uniform random (a0, b) pairs over a rectangle."""

    count: int
    a0_range: tuple[float, float] = DEFAULT_A0_RANGE
    b_range: tuple[float, float] = DEFAULT_B_RANGE

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError("sample count must be at least 1")
        for label, (lo, hi) in (("a0_range", self.a0_range), ("b_range", self.b_range)):
            if not lo <= hi:
                raise ValueError(f"{label} is empty: ({lo}, {hi})")


@dataclass(frozen=True)
class GridSampling:
    """Rectangular grid of (a0, b) cells with a fixed replicate count."""

    a0_values: tuple[float, ...]
    b_values: tuple[float, ...]
    replicates: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "a0_values", tuple(self.a0_values))
        object.__setattr__(self, "b_values", tuple(self.b_values))
        if not self.a0_values:
            raise ValueError("a0_values is empty")
        if not self.b_values:
            raise ValueError("b_values is empty")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a base parameter set, a sampling plan and a scenario.

    base_params supplies everything except a0, b, the seed and the
    initial beliefs, which are set per sample.
    """

    base_params: SimulationParams
    sampling: RandomSampling | GridSampling
    scenario: str = "split-10-10"
    checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS
    master_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "checkpoints", tuple(self.checkpoints))
        scenario_by_name(self.scenario)  # fail fast on unknown names
        if not self.checkpoints:
            raise ValueError("checkpoints must be nonempty")


@dataclass(frozen=True)
class PhasePoint:
    """Outcome of one sampled simulation in the (a0, b) plane."""

    sample_index: int
    a0: float
    b: float
    mean_beliefs: dict[int, Fraction]  # per checkpoint; frozen after halt
    final_mean_belief: Fraction
    halted_by_stability: bool
    halt_step: int
    classification: str

    @property
    def magnitude(self) -> float:
        return abs(float(self.final_mean_belief))


def classify(mean_belief: Fraction) -> str:
    if mean_belief > 0:
        return "belief"
    if mean_belief < 0:
        return "disbelief"
    return "undecided"


def sample_points(spec: SweepSpec) -> list[tuple[float, float]]:
    """The (a0, b) pairs in sample-index order."""
    sampling = spec.sampling
    if isinstance(sampling, GridSampling):
        return [
            (a0, b)
            for a0 in sampling.a0_values
            for b in sampling.b_values
            for _ in range(sampling.replicates)
        ]
    points = []
    for i in range(sampling.count):
        rnd = random.Random(child_seed(spec.master_seed, 2 * i))
        a0 = sampling.a0_range[0] + rnd.random() * (
            sampling.a0_range[1] - sampling.a0_range[0]
        )
        b = sampling.b_range[0] + rnd.random() * (
            sampling.b_range[1] - sampling.b_range[0]
        )
        points.append((a0, b))
    return points


def sample_params(spec: SweepSpec, index: int, a0: float, b: float) -> SimulationParams:
    scenario = scenario_by_name(spec.scenario)
    return replace(
        spec.base_params,
        initial_beliefs=scenario.beliefs(),
        n_experts=scenario.n_experts,
        update_policy=replace(spec.base_params.update_policy, base_affinity=a0),
        bias_policy=replace(spec.base_params.bias_policy, bias=b),
        seed=child_seed(spec.master_seed, 2 * index + 1),
    )


def _phase_point(spec: SweepSpec, index: int, a0: float, b: float) -> PhasePoint:
    trajectory = run(sample_params(spec, index, a0, b), spec.checkpoints)
    final = trajectory.final_mean_belief
    mean_beliefs = {
        cp: trajectory.snapshots.get(cp, final) for cp in spec.checkpoints
    }
    return PhasePoint(
        sample_index=index,
        a0=a0,
        b=b,
        mean_beliefs=mean_beliefs,
        final_mean_belief=final,
        halted_by_stability=trajectory.halted_by_stability,
        halt_step=trajectory.halt_step,
        classification=classify(final),
    )


def _phase_point_star(args: tuple) -> PhasePoint:
    return _phase_point(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[PhasePoint]:
    """Run every sampled simulation; output order is sample-index order."""
    tasks = [
        (spec, i, a0, b) for i, (a0, b) in enumerate(sample_points(spec))
    ]
    if workers <= 1 or len(tasks) <= 1:
        return [_phase_point_star(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_phase_point_star, tasks, chunksize=chunk))


def trajectory_for_sample(spec: SweepSpec, index: int) -> Trajectory:
    """Re-run one sweep sample as a plain trajectory (for inspection)."""
    points = sample_points(spec)
    a0, b = points[index]
    return run(sample_params(spec, index, a0, b), spec.checkpoints)


def freeze_scenario_mean_total(
    base_params: SimulationParams, scenario: Scenario, n_questions: int
) -> float:
    """Mean total reward of a frozen-belief run of one scenario, bias off."""
    params = replace(
        base_params,
        initial_beliefs=scenario.beliefs(),
        n_experts=scenario.n_experts,
        bias_policy=replace(base_params.bias_policy, bias=0.0),
        seed=child_seed(base_params.seed, 1),
    )
    return freeze_beliefs_run(params, n_questions)


def calibrate(
    base_params: SimulationParams, n_questions: int
) -> tuple[float, float]:
    """Estimate the affinity threshold reward and the exit threshold.

    Two frozen-belief runs with the bias turned off: a half/half split of
    strongest disbelief and belief sets the scale of very large rewards
    (half its mean total is the affinity threshold), and a unanimous
    strongest-belief group sets the scale of very small rewards (twice its
    mean total is the exit threshold).
    """
    n = base_params.n_experts
    half = n // 2
    split = (-4,) * half + (4,) * (n - half)
    no_bias = replace(base_params.bias_policy, bias=0.0)
    split_params = replace(
        base_params,
        initial_beliefs=split,
        bias_policy=no_bias,
        seed=child_seed(base_params.seed, 0),
    )
    top_params = replace(
        base_params,
        initial_beliefs=(4,) * n,
        bias_policy=no_bias,
        seed=child_seed(base_params.seed, 1),
    )
    r0_estimate = freeze_beliefs_run(split_params, n_questions) / 2.0
    r_threshold_estimate = 2.0 * freeze_beliefs_run(top_params, n_questions)
    return r0_estimate, r_threshold_estimate


# ---------------------------------------------------------------------------
# Dataset emission: comma-separated values plus a JSON metadata sidecar.
# ---------------------------------------------------------------------------


def phase_columns(checkpoints: tuple[int, ...]) -> list[str]:
    return (
        ["sample_index", "a0", "b"]
        + [f"mean_belief_{cp}" for cp in checkpoints]
        + ["final_mean_belief", "halted", "halt_step", "classification"]
    )


def phase_dataset_lines(points: list[PhasePoint], checkpoints: tuple[int, ...]) -> list[str]:
    lines = [",".join(phase_columns(checkpoints))]
    for p in points:
        row = [str(p.sample_index), repr(p.a0), repr(p.b)]
        row += [repr(float(p.mean_beliefs[cp])) for cp in checkpoints]
        row += [
            repr(float(p.final_mean_belief)),
            "true" if p.halted_by_stability else "false",
            str(p.halt_step),
            p.classification,
        ]
        lines.append(",".join(row))
    return lines


def sweep_metadata(spec: SweepSpec) -> dict:
    sampling = asdict(spec.sampling)
    sampling["mode"] = "grid" if isinstance(spec.sampling, GridSampling) else "random"
    scenario = scenario_by_name(spec.scenario)
    return {
        "format": "phase-dataset/1",
        "artifact_version": __version__,
        "generator": GENERATOR_ID,
        "master_seed": spec.master_seed,
        "scenario": {"name": scenario.name, "layout": [list(p) for p in scenario.layout]},
        "sampling": sampling,
        "checkpoints": list(spec.checkpoints),
        "base_params": _base_params_dict(spec.base_params),
        "columns": phase_columns(spec.checkpoints),
    }


def _base_params_dict(params: SimulationParams) -> dict:
    out = asdict(params)
    out["initial_beliefs"] = list(params.initial_beliefs)
    out["forecast_clamp"] = list(params.forecast_clamp)
    return out


def write_phase_dataset(
    points: list[PhasePoint], spec: SweepSpec, csv_path: str | Path, meta_path: str | Path
) -> tuple[Path, Path]:
    csv_path = Path(csv_path)
    meta_path = Path(meta_path)
    csv_path.write_text(
        "\n".join(phase_dataset_lines(points, spec.checkpoints)) + "\n", encoding="utf-8"
    )
    meta_path.write_text(
        json.dumps(sweep_metadata(spec), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    return csv_path, meta_path
