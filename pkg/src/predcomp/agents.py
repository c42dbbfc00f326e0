"""Expert behaviour: forecasts from belief, belief drift and updates, bias.

Belief in the focal theory is an integer degree d in [-4, 4].  Because the
theory is taken to be objectively true in the model, positive d translates
into forecasts aligned with the actual outcome via a family of power-law
profiles; negative d mirrors them.  Beliefs move through two channels, an
undirected random walk (the mutation rate) and a reward-motivated pull
toward the current leader.  Resolutions of question outcomes are biased:
a badly surprised expert may reject the objective outcome outright.

All functions take their random draws as explicit arguments, so they are
pure and the caller owns the stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

BELIEF_MIN = -4
BELIEF_MAX = 4

# Power-law exponent per |d|, chosen so the mean forecast climbs in even
# steps of about 11.4% per belief level (k/(k+1) at level k's exponent).
DEFAULT_FORECAST_EXPONENTS: dict[int, float] = {
    0: 1.0,
    1: 1.6,
    2: 2.7,
    3: 5.3,
    4: 21.0,
}

DEFAULT_FORECAST_CLAMP = (0.01, 0.99)


@dataclass(frozen=True)
class UpdatePolicy:
    """Knobs for the two belief-update channels.

    weight_mean (x) and weight_max (y) blend the group-mean and leader
    cumulative rewards into the "large reward" benchmark; they must sum
    to exactly 1.
    """

    mutation_rate: float = 0.01
    base_affinity: float = 0.15
    affinity_threshold_reward: float = 50.0
    weight_mean: float = 0.5
    weight_max: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError(f"mutation_rate {self.mutation_rate} outside [0, 1]")
        if self.base_affinity < 0.0:
            raise ValueError("base_affinity must be nonnegative")
        if self.affinity_threshold_reward <= 0.0:
            raise ValueError("affinity_threshold_reward must be positive")
        if self.weight_mean < 0.0 or self.weight_max < 0.0:
            raise ValueError("large-reward weights must be nonnegative")
        if self.weight_mean + self.weight_max != 1.0:
            raise ValueError(
                "large_reward_weights must sum to exactly 1, got "
                f"({self.weight_mean}, {self.weight_max})"
            )


@dataclass(frozen=True)
class BiasPolicy:
    """Collective bias strength and the surprisal scale deemed tolerable."""

    bias: float = 0.0
    threshold_bias: float = 0.7

    def __post_init__(self) -> None:
        if self.bias < 0.0:
            raise ValueError("bias must be nonnegative")
        if self.threshold_bias <= 0.0:
            raise ValueError("threshold_bias must be positive")


def _check_belief(d: int) -> None:
    if not BELIEF_MIN <= d <= BELIEF_MAX or d != int(d):
        raise ValueError(f"belief level {d!r} outside [{BELIEF_MIN}, {BELIEF_MAX}]")


def _check_draw(nu: float) -> None:
    if not 0.0 < nu < 1.0:
        raise ValueError(f"uniform draw {nu!r} outside (0, 1)")


def sample_forecast(
    d: int,
    objective_outcome: int,
    nu: float,
    clamp: tuple[float, float] = DEFAULT_FORECAST_CLAMP,
    exponents: dict[int, float] | None = None,
) -> float:
    """One forecast for the probability of a yes outcome.

    The base profile is 1 - nu**k for d >= 0 and nu**k for d < 0, with k
    looked up by |d|.  It is mirrored when the objective outcome is no,
    then clamped, so certainty is never asserted.
    """
    _check_belief(d)
    _check_draw(nu)
    if objective_outcome not in (-1, 1):
        raise ValueError(f"objective outcome must be -1 or +1, got {objective_outcome!r}")
    p_min, p_max = clamp
    if not 0.0 <= p_min < p_max <= 1.0:
        raise ValueError(f"invalid forecast clamp ({p_min}, {p_max})")
    table = DEFAULT_FORECAST_EXPONENTS if exponents is None else exponents
    k = table[abs(d)]
    base = nu**k if d < 0 else 1.0 - nu**k
    if objective_outcome == -1:
        base = 1.0 - base
    return min(max(base, p_min), p_max)


def mutate_belief(d: int, mutation_rate: float, nu_up: float, nu_down: float) -> int:
    """Undirected one-step walk; both draws are always consumed.

    The up draw fires first (saturating at +4), then the down draw
    (saturating at -4), so both firing in one call cancels out.
    """
    _check_belief(d)
    _check_draw(nu_up)
    _check_draw(nu_down)
    if nu_up < mutation_rate and d < BELIEF_MAX:
        d += 1
    if nu_down < mutation_rate and d > BELIEF_MIN:
        d -= 1
    return d


def large_reward(
    mean_cumulative: float, max_cumulative: float, weight_mean: float, weight_max: float
) -> float:
    """Benchmark reward: weighted blend of group mean and leader totals."""
    return weight_mean * mean_cumulative + weight_max * max_cumulative


def effective_affinity(
    base_affinity: float, question_total_reward: float, threshold_reward: float
) -> float:
    """Affinity damped by how much reward the question actually paid out.

    a0 * r / (r + r0) for positive totals; defined as 0 when the total is
    nonpositive, since there is then no reward worth chasing.
    """
    if threshold_reward <= 0.0:
        raise ValueError("threshold_reward must be positive")
    if question_total_reward <= 0.0:
        return 0.0
    return (
        base_affinity
        * question_total_reward
        / (question_total_reward + threshold_reward)
    )


def reward_motivated_update(
    d: int,
    d_leader: int,
    cumulative: float,
    large: float,
    affinity: float,
    nu: float,
) -> int:
    """Possibly move one step toward the leader's belief.

    The keep probability is exp(-affinity * deficit / large) where
    deficit = large - cumulative.  A nonpositive benchmark, or an expert
    already at or above it, never updates.
    """
    _check_belief(d)
    _check_belief(d_leader)
    _check_draw(nu)
    deficit = large - cumulative
    if large <= 0.0 or deficit <= 0.0:
        return d
    if nu <= math.exp(-affinity * deficit / large):
        return d
    return d + (d_leader > d) - (d_leader < d)


def resolve_outcome(
    objective_surprisal: float,
    mean_objective_surprisal: float,
    objective_outcome: int,
    policy: BiasPolicy,
    nu: float,
) -> int:
    """Validate the objective outcome, or reject it when too surprised.

    Accepts with probability exp(-b * s / (s_mean + b0)); otherwise the
    expert asserts the opposite outcome.  Never abstains.
    """
    if objective_outcome not in (-1, 1):
        raise ValueError(f"objective outcome must be -1 or +1, got {objective_outcome!r}")
    if objective_surprisal < 0.0 or mean_objective_surprisal < 0.0:
        raise ValueError("surprisals must be nonnegative")
    _check_draw(nu)
    keep = math.exp(
        -policy.bias
        * objective_surprisal
        / (mean_objective_surprisal + policy.threshold_bias)
    )
    return objective_outcome if nu <= keep else -objective_outcome
