"""predcomp: Monte Carlo simulator of a self-governing prediction competition.

Experts forecast binary questions and are rewarded by a rule that combines
prediction accuracy (surprisal), question significance (surprisal spread)
and group consensus.  The package provides the scoring rule, the expert
behaviour model, a deterministic simulation engine, a parameter-sweep
harness for phase diagrams, and a CLI.
"""

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
from .engine import (
    DEFAULT_CHECKPOINTS,
    ExpertState,
    QuestionRecord,
    SimulationParams,
    Trajectory,
    freeze_beliefs_run,
    run,
    step,
    write_trajectory,
)
from .rng import GENERATOR_ID, DrawStream, child_seed
from .scoring import (
    ConsensusSummary,
    RewardVector,
    SurprisalStats,
    consensus_summary,
    score_question,
    surprisal,
    surprisal_stats,
)
from .sweep import (
    GridSampling,
    PhasePoint,
    RandomSampling,
    Scenario,
    SweepSpec,
    builtin_scenarios,
    calibrate,
    classify,
    run_sweep,
    scenario_by_name,
    write_phase_dataset,
)

__all__ = [
    "__version__",
    "BELIEF_MAX",
    "BELIEF_MIN",
    "DEFAULT_CHECKPOINTS",
    "DEFAULT_FORECAST_EXPONENTS",
    "GENERATOR_ID",
    "BiasPolicy",
    "ConsensusSummary",
    "DrawStream",
    "ExpertState",
    "GridSampling",
    "PhasePoint",
    "QuestionRecord",
    "RandomSampling",
    "RewardVector",
    "Scenario",
    "SimulationParams",
    "SurprisalStats",
    "SweepSpec",
    "Trajectory",
    "UpdatePolicy",
    "builtin_scenarios",
    "calibrate",
    "child_seed",
    "classify",
    "consensus_summary",
    "effective_affinity",
    "freeze_beliefs_run",
    "large_reward",
    "mutate_belief",
    "resolve_outcome",
    "reward_motivated_update",
    "run",
    "run_sweep",
    "sample_forecast",
    "scenario_by_name",
    "score_question",
    "step",
    "surprisal",
    "surprisal_stats",
    "write_phase_dataset",
    "write_trajectory",
]
