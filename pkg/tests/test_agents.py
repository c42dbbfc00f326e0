import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predcomp.agents import (
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

UNCLAMPED = (0.0, 1.0)

beliefs = st.integers(min_value=BELIEF_MIN, max_value=BELIEF_MAX)
draws = st.floats(min_value=1e-9, max_value=1.0, exclude_max=True)


class TestForecastProfile:
    def test_exponents_strictly_increase(self):
        ks = [DEFAULT_FORECAST_EXPONENTS[level] for level in range(5)]
        assert ks == sorted(ks)
        assert len(set(ks)) == 5

    def test_undecided_is_uniform(self):
        assert sample_forecast(0, 1, 0.3) == 0.7

    def test_strong_belief_hits_clamp(self):
        assert sample_forecast(4, 1, 0.5) == 0.99

    def test_mirrored_profile_value(self):
        # frozen from direct evaluation of 1 - 0.4**2.7
        assert sample_forecast(-2, -1, 0.4) == pytest.approx(
            0.9157515389226089, abs=1e-15
        )

    def test_bad_draw_rejected(self):
        for nu in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ValueError):
                sample_forecast(2, 1, nu)

    def test_bad_outcome_and_belief_rejected(self):
        with pytest.raises(ValueError):
            sample_forecast(2, 0, 0.5)
        with pytest.raises(ValueError):
            sample_forecast(5, 1, 0.5)

    @pytest.mark.parametrize("d", range(1, 5))
    def test_mean_matches_profile(self, d):
        # smaller-sample version of the calibration acceptance check
        rng = np.random.default_rng(99)
        n = 20_000
        mean = np.mean(
            [sample_forecast(d, 1, nu, UNCLAMPED) for nu in rng.random(n)]
        )
        k = DEFAULT_FORECAST_EXPONENTS[d]
        assert mean == pytest.approx(k / (k + 1), abs=0.01)

    @given(beliefs, st.sampled_from([-1, 1]), draws)
    def test_mirror_symmetry(self, d, outcome, nu):
        if d == 0:
            # the level-0 profile mirrors under nu -> 1 - nu instead
            a = sample_forecast(0, outcome, nu)
            b = sample_forecast(0, outcome, 1.0 - nu) if 0.0 < 1.0 - nu < 1.0 else None
            if b is not None:
                assert a == pytest.approx(1.0 - b, abs=1e-15)
            return
        a = sample_forecast(d, outcome, nu)
        b = sample_forecast(-d, outcome, nu)
        assert a == pytest.approx(1.0 - b, abs=1e-15)

    @given(beliefs, st.sampled_from([-1, 1]), draws)
    def test_clamped_into_range(self, d, outcome, nu):
        p = sample_forecast(d, outcome, nu)
        assert 0.01 <= p <= 0.99


class TestMutateBelief:
    def test_zero_rate_is_inert(self):
        assert mutate_belief(2, 0.0, 0.5, 0.5) == 2

    def test_saturation_at_top(self):
        # increment blocked at +4, decrement still fires
        assert mutate_belief(4, 1.0, 0.5, 0.999999) == 3

    def test_saturation_at_bottom(self):
        # up draw misses, down draw fires but is pinned at -4
        assert mutate_belief(-4, 0.5, 0.9, 0.1) == -4

    def test_double_fire_cancels(self):
        assert mutate_belief(0, 0.01, 0.005, 0.005) == 0

    @given(beliefs, st.floats(min_value=0.0, max_value=1.0), draws, draws)
    def test_stays_on_scale(self, d, mu, nu1, nu2):
        out = mutate_belief(d, mu, nu1, nu2)
        assert BELIEF_MIN <= out <= BELIEF_MAX
        assert abs(out - d) <= 1


class TestLargeReward:
    def test_even_blend(self):
        assert large_reward(10.0, 30.0, 0.5, 0.5) == 20.0

    def test_degenerate_equality(self):
        assert large_reward(5.0, 5.0, 0.25, 0.75) == 5.0

    def test_negative_totals(self):
        assert large_reward(-4.0, -1.0, 0.25, 0.75) == -1.75


class TestEffectiveAffinity:
    def test_at_threshold(self):
        assert effective_affinity(0.2, 50.0, 50.0) == pytest.approx(0.1)

    def test_zero_total(self):
        assert effective_affinity(0.2, 0.0, 50.0) == 0.0

    def test_asymptote(self):
        assert effective_affinity(0.2, 1e9, 50.0) == pytest.approx(0.2, abs=1e-7)

    def test_negative_total_disables_updates(self):
        assert effective_affinity(0.2, -3.0, 50.0) == 0.0

    def test_bad_threshold_rejected(self):
        with pytest.raises(ValueError):
            effective_affinity(0.2, 1.0, 0.0)

    @given(
        st.floats(min_value=0.0, max_value=2.0),
        st.floats(min_value=0.0, max_value=1e9),
        st.floats(min_value=1e-3, max_value=1e6),
    )
    def test_bounds(self, a0, total, r0):
        a = effective_affinity(a0, total, r0)
        assert 0.0 <= a
        if a0 > 0.0:
            assert a < a0
        else:
            assert a == 0.0


class TestRewardMotivatedUpdate:
    def test_zero_deficit_keeps(self):
        assert reward_motivated_update(-4, 4, 10.0, 10.0, 5.0, 0.999) == -4

    def test_leader_tie_keeps_even_when_fired(self):
        assert reward_motivated_update(2, 2, 0.0, 10.0, 50.0, 0.999) == 2

    def test_update_toward_leader(self):
        # keep probability exp(-0.15) = 0.8607079764250578 < 0.9, so it moves
        assert reward_motivated_update(-1, 3, 0.0, 1.0, 0.15, 0.9) == 0

    def test_keep_below_threshold_draw(self):
        assert reward_motivated_update(-1, 3, 0.0, 1.0, 0.15, 0.86) == -1

    def test_nonpositive_benchmark_keeps(self):
        assert reward_motivated_update(1, 4, -2.0, 0.0, 1.0, 0.999) == 1
        assert reward_motivated_update(1, 4, -2.0, -5.0, 1.0, 0.999) == 1

    def test_above_benchmark_keeps(self):
        assert reward_motivated_update(1, 4, 20.0, 10.0, 1.0, 0.999) == 1

    @given(beliefs, beliefs, st.floats(-100, 100), st.floats(-100, 100),
           st.floats(min_value=0.0, max_value=10.0), draws)
    def test_stays_on_scale_and_steps_by_one(self, d, d_leader, cum, large, a, nu):
        out = reward_motivated_update(d, d_leader, cum, large, a, nu)
        assert BELIEF_MIN <= out <= BELIEF_MAX
        assert abs(out - d) <= 1
        if out != d:
            assert (out - d) == (1 if d_leader > d else -1)


class TestResolveOutcome:
    def test_zero_bias_always_agrees(self):
        policy = BiasPolicy(bias=0.0)
        rng = np.random.default_rng(7)
        for nu in rng.random(200):
            if not 0.0 < nu < 1.0:
                continue
            assert resolve_outcome(3.0, 1.0, 1, policy, float(nu)) == 1

    def test_zero_surprisal_always_agrees(self):
        policy = BiasPolicy(bias=50.0)
        assert resolve_outcome(0.0, 2.0, -1, policy, 0.999999) == -1

    def test_huge_bias_always_rejects(self):
        # keep probability exp(-100) is below any representable draw
        policy = BiasPolicy(bias=100.0, threshold_bias=0.7)
        rng = np.random.default_rng(11)
        outcomes = {
            resolve_outcome(1.4, 0.7, 1, policy, float(nu))
            for nu in rng.random(10_000)
            if 0.0 < nu < 1.0
        }
        assert outcomes == {-1}

    def test_agreement_rate_tracks_formula(self):
        policy = BiasPolicy(bias=0.8, threshold_bias=0.7)
        s, s_mean = 1.3, 0.9
        expected = math.exp(-policy.bias * s / (s_mean + policy.threshold_bias))
        rng = np.random.default_rng(123)
        n = 20_000
        hits = sum(
            resolve_outcome(s, s_mean, 1, policy, float(nu)) == 1
            for nu in rng.random(n)
        )
        se = math.sqrt(expected * (1 - expected) / n)
        assert abs(hits / n - expected) < 3 * se

    def test_never_abstains(self):
        policy = BiasPolicy(bias=1.0)
        assert resolve_outcome(0.5, 0.5, 1, policy, 0.5) in (-1, 1)


class TestPolicies:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            UpdatePolicy(weight_mean=0.6, weight_max=0.5)

    def test_mutation_rate_range(self):
        with pytest.raises(ValueError):
            UpdatePolicy(mutation_rate=1.5)

    def test_threshold_reward_positive(self):
        with pytest.raises(ValueError):
            UpdatePolicy(affinity_threshold_reward=0.0)

    def test_bias_policy_validation(self):
        with pytest.raises(ValueError):
            BiasPolicy(bias=-0.1)
        with pytest.raises(ValueError):
            BiasPolicy(threshold_bias=0.0)

    def test_paper_like_defaults_construct(self):
        policy = UpdatePolicy()
        assert policy.mutation_rate == 0.01
        assert policy.affinity_threshold_reward == 50.0
        assert policy.weight_mean == policy.weight_max == 0.5
        assert BiasPolicy().threshold_bias == 0.7


class TestBeliefWalkComposition:
    @given(
        st.integers(min_value=BELIEF_MIN, max_value=BELIEF_MAX),
        st.lists(
            st.tuples(draws, draws, draws, beliefs, st.floats(0, 5), st.floats(-10, 10)),
            max_size=60,
        ),
    )
    @settings(max_examples=100)
    def test_any_op_sequence_stays_on_scale(self, d, events):
        for nu1, nu2, nu3, leader, affinity, large in events:
            d = mutate_belief(d, 0.3, nu1, nu2)
            d = reward_motivated_update(d, leader, 0.0, large, affinity, nu3)
            assert BELIEF_MIN <= d <= BELIEF_MAX
