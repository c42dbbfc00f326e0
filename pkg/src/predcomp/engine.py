"""Single-simulation driver: a deterministic question loop from one seed.

Each question consumes exactly 1 + 5N uniforms from the stream, in a fixed
order: the outcome draw, one forecast draw per expert, one resolution draw
per expert, then per expert two mutation draws and one update draw.  Two
runs with identical parameters (seed included) are therefore bit-identical.

The run halts once the total reward paid per question has stayed below the
reward threshold for n_stable consecutive questions, or after n_max
questions otherwise.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from ._version import __version__
from .agents import (
    BELIEF_MAX,
    BELIEF_MIN,
    DEFAULT_FORECAST_EXPONENTS,
    BiasPolicy,
    UpdatePolicy,
    effective_affinity,
    large_reward,
    mutate_belief,
    resolve_outcome,
    reward_motivated_update,
    sample_forecast,
)
from .rng import GENERATOR_ID, DrawStream
from .scoring import (
    ConsensusSummary,
    RewardVector,
    SurprisalStats,
    consensus_summary,
    question_surprisals,
    reward_vector,
    surprisal_stats,
)

DEFAULT_CHECKPOINTS = (1, 10, 50, 100, 1000)

_MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class SimulationParams:
    """All constants of one simulated competition."""

    initial_beliefs: tuple[int, ...]
    n_experts: int = 20
    update_policy: UpdatePolicy = UpdatePolicy()
    bias_policy: BiasPolicy = BiasPolicy()
    breadth_constant: float = 1.0
    forecast_clamp: tuple[float, float] = (0.01, 0.99)
    reward_threshold: float = 4.04
    n_stable: int = 4
    n_max: int = 1000
    outcome_yes_probability: float = 0.5
    seed: int = 0
    forecast_exponents: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_FORECAST_EXPONENTS)
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "initial_beliefs", tuple(self.initial_beliefs))
        object.__setattr__(self, "forecast_clamp", tuple(self.forecast_clamp))
        if self.n_experts < 1:
            raise ValueError("n_experts must be positive")
        if len(self.initial_beliefs) != self.n_experts:
            raise ValueError(
                f"initial_beliefs has length {len(self.initial_beliefs)}, "
                f"expected n_experts = {self.n_experts}"
            )
        for d in self.initial_beliefs:
            if not BELIEF_MIN <= d <= BELIEF_MAX:
                raise ValueError(f"initial belief {d!r} outside [-4, 4]")
        if self.n_max < 1:
            raise ValueError("n_max must be positive")
        if self.n_stable < 1:
            raise ValueError("n_stable must be positive")
        if not 0.0 <= self.outcome_yes_probability <= 1.0:
            raise ValueError("outcome_yes_probability outside [0, 1]")
        p_min, p_max = self.forecast_clamp
        if not 0.0 <= p_min < p_max <= 1.0:
            raise ValueError(f"invalid forecast_clamp ({p_min}, {p_max})")
        if not 0 <= self.seed <= _MAX_SEED:
            raise ValueError("seed must be a 64-bit unsigned integer")
        levels = set(self.forecast_exponents)
        if levels != {0, 1, 2, 3, 4}:
            raise ValueError("forecast_exponents must map levels 0..4")

    @property
    def draws_per_question(self) -> int:
        return 1 + 5 * self.n_experts


@dataclass
class ExpertState:
    belief: int
    cumulative_reward: float


@dataclass(frozen=True)
class QuestionRecord:
    """Full trace of one question.

    consensus_surprisals is None when the group split evenly, in which
    case every reward is exactly zero.
    """

    index: int
    objective_outcome: int
    forecasts: list[float]
    objective_surprisals: list[float]
    resolutions: list[int]
    consensus: ConsensusSummary
    consensus_surprisals: list[float] | None
    surprisal_stats: SurprisalStats | None
    rewards: RewardVector
    beliefs_after: list[int]
    total_reward: float

    def mean_belief(self) -> Fraction:
        return Fraction(sum(self.beliefs_after), len(self.beliefs_after))


@dataclass
class Trajectory:
    params: SimulationParams
    records: list[QuestionRecord]
    halted_by_stability: bool
    halt_step: int
    snapshots: dict[int, Fraction]

    @property
    def final_mean_belief(self) -> Fraction:
        return self.snapshots[self.halt_step]


def step(
    state: list[ExpertState],
    params: SimulationParams,
    stream,
    index: int = 1,
    update_beliefs: bool = True,
) -> tuple[list[ExpertState], QuestionRecord]:
    """Play one question and return the new expert states and its record.

    Consumes exactly params.draws_per_question uniforms from `stream`
    whether or not belief updates are enabled.
    """
    n = params.n_experts
    if len(state) != n:
        raise ValueError(f"state has {len(state)} experts, expected {n}")
    draws = stream.take(1 + 5 * n)

    omega = 1 if draws[0] < params.outcome_yes_probability else -1
    clamp = params.forecast_clamp
    exponents = params.forecast_exponents
    beliefs = [e.belief for e in state]
    forecasts = [
        sample_forecast(beliefs[i], omega, draws[1 + i], clamp, exponents)
        for i in range(n)
    ]

    objective_surprisals = question_surprisals(forecasts, omega)
    mean_objective = sum(objective_surprisals) / n

    bias = params.bias_policy
    resolutions = [
        resolve_outcome(objective_surprisals[i], mean_objective, omega, bias, draws[1 + n + i])
        for i in range(n)
    ]

    cons = consensus_summary(resolutions)
    if cons.effective_outcome == 0:
        consensus_surprisals = None
        stats = None
        rewards = RewardVector([0.0] * n, 0.0)
    else:
        if cons.effective_outcome == omega:
            consensus_surprisals = objective_surprisals
        else:
            consensus_surprisals = question_surprisals(forecasts, cons.effective_outcome)
        stats = surprisal_stats(consensus_surprisals, params.breadth_constant)
        rewards = reward_vector(consensus_surprisals, stats, cons.consensus)

    new_cumulative = [
        state[i].cumulative_reward + rewards.per_expert[i] for i in range(n)
    ]
    max_cumulative = max(new_cumulative)
    leader = new_cumulative.index(max_cumulative)  # ties go to the lowest index
    d_leader = beliefs[leader]
    policy = params.update_policy
    benchmark = large_reward(
        sum(new_cumulative) / n, max_cumulative, policy.weight_mean, policy.weight_max
    )
    affinity = effective_affinity(
        policy.base_affinity, rewards.total, policy.affinity_threshold_reward
    )

    if update_beliefs:
        mu = policy.mutation_rate
        base = 1 + 2 * n
        new_beliefs = []
        for i in range(n):
            at = base + 3 * i
            d = mutate_belief(beliefs[i], mu, draws[at], draws[at + 1])
            d = reward_motivated_update(
                d, d_leader, new_cumulative[i], benchmark, affinity, draws[at + 2]
            )
            new_beliefs.append(d)
    else:
        new_beliefs = beliefs

    new_state = [ExpertState(new_beliefs[i], new_cumulative[i]) for i in range(n)]
    record = QuestionRecord(
        index=index,
        objective_outcome=omega,
        forecasts=forecasts,
        objective_surprisals=objective_surprisals,
        resolutions=resolutions,
        consensus=cons,
        consensus_surprisals=consensus_surprisals,
        surprisal_stats=stats,
        rewards=rewards,
        beliefs_after=list(new_beliefs),
        total_reward=rewards.total,
    )
    return new_state, record


def run(
    params: SimulationParams, checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS
) -> Trajectory:
    """Run one full simulation and snapshot mean beliefs at the checkpoints.

    Snapshots are exact rationals (integer belief sum over N) so a mean of
    zero is never misclassified.  The halt step is always snapshotted.
    """
    stream = DrawStream(params.seed)
    state = [ExpertState(d, 0.0) for d in params.initial_beliefs]
    records: list[QuestionRecord] = []
    low_streak = 0
    halted = False
    for j in range(1, params.n_max + 1):
        state, record = step(state, params, stream, index=j)
        records.append(record)
        if record.total_reward < params.reward_threshold:
            low_streak += 1
        else:
            low_streak = 0
        if low_streak >= params.n_stable:
            halted = True
            break
    halt_step = records[-1].index
    snapshots = {
        cp: records[cp - 1].mean_belief()
        for cp in sorted(checkpoints)
        if 1 <= cp <= halt_step
    }
    snapshots[halt_step] = records[-1].mean_belief()
    return Trajectory(params, records, halted, halt_step, snapshots)


def freeze_beliefs_run(params: SimulationParams, n_questions: int) -> float:
    """Mean total reward over n_questions with beliefs pinned in place.

    No belief updates, no exit criterion; used to calibrate the reward
    scale of a fixed-belief population.
    """
    if n_questions < 1:
        raise ValueError("n_questions must be positive")
    stream = DrawStream(params.seed)
    state = [ExpertState(d, 0.0) for d in params.initial_beliefs]
    total = 0.0
    for j in range(1, n_questions + 1):
        state, record = step(state, params, stream, index=j, update_beliefs=False)
        total += record.total_reward
    return total / n_questions


# ---------------------------------------------------------------------------
# Serialization: one question per line, preceded by a JSON metadata header.
# Column order is fixed; delta_s and s_big are empty on unresolved questions.
# ---------------------------------------------------------------------------

TRAJECTORY_COLUMNS = (
    "j",
    "omega",
    "V",
    "q",
    "delta_s",
    "s_big",
    "r_total",
    "mean_belief",
)


def params_dict(params: SimulationParams) -> dict:
    out = asdict(params)
    out["initial_beliefs"] = list(params.initial_beliefs)
    out["forecast_clamp"] = list(params.forecast_clamp)
    return out


def trajectory_metadata(trajectory: Trajectory) -> dict:
    return {
        "format": "trajectory/1",
        "artifact_version": __version__,
        "generator": GENERATOR_ID,
        "seed": trajectory.params.seed,
        "params": params_dict(trajectory.params),
        "halted_by_stability": trajectory.halted_by_stability,
        "halt_step": trajectory.halt_step,
        "snapshots": {str(j): str(m) for j, m in sorted(trajectory.snapshots.items())},
    }


def trajectory_lines(trajectory: Trajectory) -> list[str]:
    meta = trajectory_metadata(trajectory)
    lines = [
        "#meta " + json.dumps(meta, sort_keys=True, separators=(",", ":")),
        "\t".join(TRAJECTORY_COLUMNS),
    ]
    for r in trajectory.records:
        stats = r.surprisal_stats
        lines.append(
            "\t".join(
                (
                    str(r.index),
                    str(r.objective_outcome),
                    repr(r.consensus.mean_resolution),
                    str(r.consensus.effective_outcome),
                    repr(stats.std_dev) if stats is not None else "",
                    repr(stats.big) if stats is not None else "",
                    repr(r.total_reward),
                    str(r.mean_belief()),
                )
            )
        )
    return lines


def write_trajectory(trajectory: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    path.write_text("\n".join(trajectory_lines(trajectory)) + "\n", encoding="utf-8")
    return path
