"""Reward computation for a single scored question.

An expert's reward on one question combines three factors: how far their
surprisal falls below the group's "big surprisal" bar, how spread out
the group's surprisals are (question significance), and how strong the
group consensus on the outcome is.  With no consensus at all, no reward
is distributed and no surprisal statistics exist.

Everything here is a pure function of its arguments; the engine feeds in
clamped forecasts and never produces abstentions (resolution 0), though
the data model accepts them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ConsensusSummary:
    """Group verdict on one question.

    mean_resolution is the plain average of the +-1 resolutions (V),
    consensus its absolute value, and effective_outcome its sign (q).
    """

    mean_resolution: float
    consensus: float
    effective_outcome: int
    participant_count: int

    @property
    def resolved(self) -> bool:
        return self.effective_outcome != 0


@dataclass(frozen=True)
class SurprisalStats:
    """Population moments of the group's surprisals on one question.

    big = mean + breadth_constant * std_dev is the bar above which a
    prediction earns a penalty.
    """

    mean: float
    mean_square: float
    std_dev: float
    big: float
    breadth_constant: float


@dataclass(frozen=True)
class RewardVector:
    per_expert: list[float]
    total: float


def consensus_summary(resolutions: list[int]) -> ConsensusSummary:
    """Mean resolution, consensus strength and effective outcome sign."""
    if not resolutions:
        raise ValueError("resolutions must be nonempty")
    for v in resolutions:
        if v not in (-1, 0, 1):
            raise ValueError(f"resolution {v!r} not in {{-1, 0, +1}}")
    n = len(resolutions)
    mean = sum(resolutions) / n
    outcome = (mean > 0) - (mean < 0)
    return ConsensusSummary(mean, abs(mean), outcome, n)


def surprisal(p: float, outcome: int) -> float:
    """Negative log of the probability assigned to the realised side."""
    if outcome not in (-1, 1):
        raise ValueError(f"outcome must be -1 or +1, got {outcome!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    on_outcome = p if outcome == 1 else 1.0 - p
    if on_outcome <= 0.0:
        raise ValueError("zero probability assigned to the realised outcome")
    return -math.log(on_outcome)


def question_surprisals(forecasts: list[float], outcome: int) -> list[float]:
    """Surprisal of every forecast against one outcome."""
    return [surprisal(p, outcome) for p in forecasts]


def surprisal_stats(surprisals: list[float], c: float) -> SurprisalStats:
    """Population mean/std of the surprisals and the big-surprisal bar."""
    if not surprisals:
        raise ValueError("surprisals must be nonempty")
    n = len(surprisals)
    mean = sum(surprisals) / n
    mean_square = sum(s * s for s in surprisals) / n
    # Round-off can push the variance of a constant list slightly negative.
    variance = max(mean_square - mean * mean, 0.0)
    std_dev = math.sqrt(variance)
    return SurprisalStats(mean, mean_square, std_dev, mean + c * std_dev, c)


def reward_vector(
    surprisals: list[float], stats: SurprisalStats, consensus: float
) -> RewardVector:
    """Per-expert rewards (big - s_i) * std_dev * consensus and their total."""
    scale = stats.std_dev * consensus
    per_expert = [(stats.big - s) * scale for s in surprisals]
    return RewardVector(per_expert, math.fsum(per_expert))


def score_question(
    forecasts: list[float], resolutions: list[int], c: float = 1.0
) -> tuple[ConsensusSummary, SurprisalStats | None, RewardVector]:
    """Score one question from everyone's forecasts and resolutions.

    With an even split (effective outcome 0) there is no way to define a
    surprisal, so the stats are absent and every reward is exactly zero.
    Otherwise surprisals are taken against the effective outcome and the
    identity total == c * N * std_dev**2 * consensus holds.
    """
    if len(forecasts) != len(resolutions):
        raise ValueError(
            f"got {len(forecasts)} forecasts but {len(resolutions)} resolutions"
        )
    cons = consensus_summary(resolutions)
    if cons.effective_outcome == 0:
        return cons, None, RewardVector([0.0] * cons.participant_count, 0.0)
    surprisals = question_surprisals(forecasts, cons.effective_outcome)
    stats = surprisal_stats(surprisals, c)
    return cons, stats, reward_vector(surprisals, stats, cons.consensus)
