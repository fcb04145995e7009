"""Resolve a CampaignConfig from a YAML file, command-line flags and the environment.

Precedence, highest first: flag, config file, FEDSIM_* environment
(seed and output directory only), built-in default.
"""

from __future__ import annotations

import copy
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from fedsim.config.settings import Settings
from fedsim.exceptions import ConfigurationError
from fedsim.models.schemas import CampaignConfig, CompletionMode


def load_config_file(path: str | Path) -> dict[str, Any]:
    target = Path(path)
    try:
        text = target.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError([f"config file {target}: {e.strerror or e}"]) from e
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigurationError([f"config file {target}: not valid YAML ({e})"]) from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError([f"config file {target}: top level must be a mapping"])
    return data


def _split_csv(raw: str, label: str, cast: type) -> list:
    items = [p.strip() for p in raw.split(",") if p.strip()]
    if not items:
        raise ConfigurationError([f"{label}: expected a comma-separated list, got {raw!r}"])
    try:
        return [cast(p) for p in items]
    except ValueError as e:
        raise ConfigurationError([f"{label}: {e}"]) from e


def flag_overrides(flags: Mapping[str, Any]) -> dict[str, Any]:
    """Translate parsed CLI flags into a nested config fragment (unset flags omitted)."""
    out: dict[str, Any] = {}

    def given(name: str) -> bool:
        return flags.get(name) is not None

    if given("profile"):
        out["profiles"] = _split_csv(flags["profile"], "--profile", str)
    if given("block_periods"):
        out["block_periods_s"] = _split_csv(flags["block_periods"], "--block-periods", float)
    if given("reps"):
        out["replications"] = flags["reps"]
    if given("seed"):
        out["base_seed"] = flags["seed"]
    if given("providers"):
        out.setdefault("topology", {})["n_providers"] = flags["providers"]
    if given("deploy_latency"):
        out.setdefault("deployment", {})["latency"] = flags["deploy_latency"]
    if given("out"):
        out["output_dir"] = flags["out"]
    if given("jobs"):
        out["jobs"] = flags["jobs"]
    if given("timeout"):
        out["timeout_s"] = flags["timeout"]
    if given("arrival_phase"):
        out["arrival_phase"] = flags["arrival_phase"]
    if given("complete_tx"):
        out["complete_tx_mode"] = (
            CompletionMode.ON_CHAIN if flags["complete_tx"] else CompletionMode.MEASUREMENT_ONLY
        ).value
    return out


def merge(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Deep merge; mappings merge key by key, everything else is replaced."""
    result = copy.deepcopy(dict(base))
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(result.get(key), Mapping):
            result[key] = merge(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


def validation_violations(error: ValidationError) -> list[str]:
    violations = []
    for item in error.errors():
        where = ".".join(str(part) for part in item["loc"]) or "config"
        violations.append(f"{where}: {item['msg']}")
    return violations


def parse_config(
    config_path: str | Path | None = None,
    flags: Mapping[str, Any] | None = None,
    settings: Settings | None = None,
) -> CampaignConfig:
    settings = settings or load_settings()
    environment = {
        "base_seed": settings.seed,
        "output_dir": settings.default_output_dir,
    }
    file_values = load_config_file(config_path) if config_path is not None else {}
    resolved = merge(merge(environment, file_values), flag_overrides(flags or {}))
    try:
        return CampaignConfig.model_validate(resolved)
    except ValidationError as e:
        raise ConfigurationError(validation_violations(e)) from e


def load_settings() -> Settings:
    try:
        return Settings()
    except ValidationError as e:
        violations = [f"FEDSIM_* environment: {v}" for v in validation_violations(e)]
        raise ConfigurationError(violations) from e
