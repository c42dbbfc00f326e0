"""Config-file parsing for the CLI.

Configs are flat JSON objects.  Unknown keys are rejected (fail closed) so
a typo never silently falls back to a default, and every error names the
offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .agents import BiasPolicy, UpdatePolicy
from .engine import DEFAULT_CHECKPOINTS, SimulationParams
from .sweep import GridSampling, RandomSampling, SweepSpec, scenario_by_name


class ConfigError(ValueError):
    pass


def _as_int(obj: dict, key: str, default=None):
    value = obj.pop(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{key}' must be an integer, got {value!r}")
    return value


def _as_float(obj: dict, key: str, default=None):
    value = obj.pop(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {value!r}")
    return float(value)


def _as_pair(obj: dict, key: str, default=None):
    value = obj.pop(key, default)
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"'{key}' must be a pair of numbers, got {value!r}")
    return (float(value[0]), float(value[1]))


def _reject_unknown(obj: dict, context: str) -> None:
    if obj:
        keys = ", ".join(sorted(repr(k) for k in obj))
        raise ConfigError(f"unknown key(s) in {context}: {keys}")


def _beliefs_from(obj: dict, context: str) -> tuple[int, ...]:
    beliefs = obj.pop("initial_beliefs", None)
    scenario = obj.pop("scenario", None)
    if beliefs is not None and scenario is not None:
        raise ConfigError(
            f"{context} sets both 'initial_beliefs' and 'scenario'; pick one"
        )
    if scenario is not None:
        try:
            return scenario_by_name(scenario).beliefs()
        except KeyError as exc:
            raise ConfigError(f"'scenario': {exc.args[0]}") from exc
    if beliefs is None:
        raise ConfigError(f"{context} needs 'initial_beliefs' or 'scenario'")
    if not isinstance(beliefs, list) or not all(
        isinstance(d, int) and not isinstance(d, bool) for d in beliefs
    ):
        raise ConfigError("'initial_beliefs' must be a list of integers")
    return tuple(beliefs)


def _exponents_from(obj: dict):
    table = obj.pop("forecast_exponents", None)
    if table is None:
        return None
    if not isinstance(table, dict):
        raise ConfigError("'forecast_exponents' must map belief levels to exponents")
    try:
        return {int(level): float(k) for level, k in table.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'forecast_exponents': {exc}") from exc


def _model_params(obj: dict, context: str, beliefs: tuple[int, ...]) -> SimulationParams:
    """Build SimulationParams from the remaining flat keys of `obj`."""
    weights = _as_pair(obj, "large_reward_weights", (0.5, 0.5))
    try:
        update_policy = UpdatePolicy(
            mutation_rate=_as_float(obj, "mutation_rate", 0.01),
            base_affinity=_as_float(obj, "base_affinity", 0.15),
            affinity_threshold_reward=_as_float(obj, "affinity_threshold_reward", 50.0),
            weight_mean=weights[0],
            weight_max=weights[1],
        )
        bias_policy = BiasPolicy(
            bias=_as_float(obj, "bias", 0.0),
            threshold_bias=_as_float(obj, "threshold_bias", 0.7),
        )
        exponents = _exponents_from(obj)
        kwargs = dict(
            initial_beliefs=beliefs,
            n_experts=_as_int(obj, "n_experts", len(beliefs)),
            update_policy=update_policy,
            bias_policy=bias_policy,
            breadth_constant=_as_float(obj, "breadth_constant", 1.0),
            forecast_clamp=_as_pair(obj, "forecast_clamp", (0.01, 0.99)),
            reward_threshold=_as_float(obj, "reward_threshold", 4.04),
            n_stable=_as_int(obj, "n_stable", 4),
            n_max=_as_int(obj, "n_max", 1000),
            outcome_yes_probability=_as_float(obj, "outcome_yes_probability", 0.5),
            seed=_as_int(obj, "seed", 0),
        )
        if exponents is not None:
            kwargs["forecast_exponents"] = exponents
        _reject_unknown(obj, context)
        return SimulationParams(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class RunConfig:
    params: SimulationParams
    checkpoints: tuple[int, ...]


def _checkpoints_from(obj: dict) -> tuple[int, ...]:
    raw = obj.pop("checkpoints", None)
    if raw is None:
        return DEFAULT_CHECKPOINTS
    if not isinstance(raw, list) or not all(
        isinstance(j, int) and not isinstance(j, bool) and j >= 1 for j in raw
    ):
        raise ConfigError("'checkpoints' must be a list of positive integers")
    return tuple(raw)


def parse_run_config(obj: dict) -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("run config must be a JSON object")
    obj = dict(obj)
    checkpoints = _checkpoints_from(obj)
    beliefs = _beliefs_from(obj, "run config")
    params = _model_params(obj, "run config", beliefs)
    return RunConfig(params, checkpoints)


def run_config_dict(params: SimulationParams, checkpoints: tuple[int, ...]) -> dict:
    """Inverse of parse_run_config, up to semantic equality."""
    policy = params.update_policy
    bias = params.bias_policy
    return {
        "initial_beliefs": list(params.initial_beliefs),
        "n_experts": params.n_experts,
        "mutation_rate": policy.mutation_rate,
        "base_affinity": policy.base_affinity,
        "affinity_threshold_reward": policy.affinity_threshold_reward,
        "large_reward_weights": [policy.weight_mean, policy.weight_max],
        "bias": bias.bias,
        "threshold_bias": bias.threshold_bias,
        "breadth_constant": params.breadth_constant,
        "forecast_clamp": list(params.forecast_clamp),
        "reward_threshold": params.reward_threshold,
        "n_stable": params.n_stable,
        "n_max": params.n_max,
        "outcome_yes_probability": params.outcome_yes_probability,
        "forecast_exponents": {str(k): v for k, v in params.forecast_exponents.items()},
        "seed": params.seed,
        "checkpoints": list(checkpoints),
    }


# Keys a sweep's base_params may not set; they are owned by the sweep itself.
_SWEEP_BASE_FORBIDDEN = (
    "base_affinity",
    "bias",
    "seed",
    "initial_beliefs",
    "scenario",
    "n_experts",
    "checkpoints",
)


def _sweep_base_params(obj: dict, scenario_name: str) -> SimulationParams:
    if not isinstance(obj, dict):
        raise ConfigError("'base_params' must be a JSON object")
    obj = dict(obj)
    for key in _SWEEP_BASE_FORBIDDEN:
        if key in obj:
            raise ConfigError(
                f"'base_params' may not set '{key}'; it is assigned per sample"
            )
    scenario = scenario_by_name(scenario_name)
    return _model_params(obj, "'base_params'", scenario.beliefs())


def _sampling_from(obj: dict) -> RandomSampling | GridSampling:
    raw = obj.pop("sampling", None)
    if raw is None:
        raise ConfigError("sweep config needs a 'sampling' object")
    if not isinstance(raw, dict):
        raise ConfigError("'sampling' must be a JSON object")
    raw = dict(raw)
    mode = raw.pop("mode", "random")
    try:
        if mode == "random":
            count = _as_int(raw, "count", None)
            if count is None:
                raise ConfigError("'sampling.count' is required in random mode")
            a0_range = _as_pair(raw, "a0_range", DEFAULT_RANGES[0])
            b_range = _as_pair(raw, "b_range", DEFAULT_RANGES[1])
            _reject_unknown(raw, "'sampling'")
            return RandomSampling(count, a0_range, b_range)
        if mode == "grid":
            a0_values = raw.pop("a0_values", None)
            b_values = raw.pop("b_values", None)
            if a0_values is None or b_values is None:
                raise ConfigError("grid sampling needs 'a0_values' and 'b_values'")
            replicates = _as_int(raw, "replicates", 1)
            _reject_unknown(raw, "'sampling'")
            return GridSampling(
                tuple(float(v) for v in a0_values),
                tuple(float(v) for v in b_values),
                replicates,
            )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"'sampling': {exc}") from exc
    raise ConfigError(f"'sampling.mode' must be 'random' or 'grid', got {mode!r}")


DEFAULT_RANGES = ((0.0, 0.3), (0.0, 1.2))


def parse_sweep_config(obj: dict) -> SweepSpec:
    if not isinstance(obj, dict):
        raise ConfigError("sweep config must be a JSON object")
    obj = dict(obj)
    master_seed = _as_int(obj, "master_seed", 0)
    scenario = obj.pop("scenario", "split-10-10")
    try:
        scenario_by_name(scenario)
    except KeyError as exc:
        raise ConfigError(f"'scenario': {exc.args[0]}") from exc
    checkpoints = _checkpoints_from(obj)
    sampling = _sampling_from(obj)
    base = _sweep_base_params(obj.pop("base_params", {}), scenario)
    _reject_unknown(obj, "sweep config")
    try:
        return SweepSpec(
            base_params=base,
            sampling=sampling,
            scenario=scenario,
            checkpoints=checkpoints,
            master_seed=master_seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class CalibrateConfig:
    base_params: SimulationParams
    n_questions: int


def parse_calibrate_config(obj: dict) -> CalibrateConfig:
    if not isinstance(obj, dict):
        raise ConfigError("calibrate config must be a JSON object")
    obj = dict(obj)
    n_questions = _as_int(obj, "n_questions", 10_000)
    if n_questions < 1:
        raise ConfigError("'n_questions' must be positive")
    seed = _as_int(obj, "seed", 0)
    n_experts = _as_int(obj, "n_experts", 20)
    base = obj.pop("base_params", {})
    if not isinstance(base, dict):
        raise ConfigError("'base_params' must be a JSON object")
    base = dict(base)
    for key in ("initial_beliefs", "scenario", "seed", "n_experts"):
        if key in base:
            raise ConfigError(
                f"'base_params' may not set '{key}' in a calibrate config"
            )
    _reject_unknown(obj, "calibrate config")
    params = _model_params(base, "'base_params'", (0,) * n_experts)
    try:
        from dataclasses import replace

        params = replace(params, seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return CalibrateConfig(params, n_questions)


def load_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
