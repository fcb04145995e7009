"""Tests for configuration resolution (file, flags, environment)."""

import numpy as np
import pytest

from fedsim.cli.config_loader import flag_overrides, load_config_file, merge, parse_config
from fedsim.config.settings import Settings
from fedsim.exceptions import ConfigurationError
from fedsim.models.schemas import CompletionMode, ProfileKind


def _write(tmp_path, text):
    path = tmp_path / "campaign.yaml"
    path.write_text(text)
    return path


def test_empty_file_gives_reference_defaults(tmp_path):
    config = parse_config(_write(tmp_path, ""), settings=Settings())
    assert config.replications == 100
    assert config.block_periods_s == [1.0, 2.0, 5.0, 10.0, 20.0]
    assert config.topology.n_providers == 1
    assert config.deployment.latency.expected() == 36.0


def test_flags_for_private_sweep():
    config = parse_config(
        flags={"block_periods": "1,2,5,10,20", "reps": 100}, settings=Settings()
    )
    assert config.block_periods_s == [1.0, 2.0, 5.0, 10.0, 20.0]
    assert config.replications == 100


def test_negative_reps_is_config_error():
    with pytest.raises(ConfigurationError) as exc:
        parse_config(flags={"reps": -1}, settings=Settings())
    assert any("replications" in v for v in exc.value.violations)


def test_every_violation_is_reported(tmp_path):
    path = _write(
        tmp_path,
        "replications: 0\nblock_periods_s: [1, 0]\nfoo: bar\ntopology:\n  n_providers: 0\n",
    )
    with pytest.raises(ConfigurationError) as exc:
        parse_config(path, settings=Settings())
    text = "\n".join(exc.value.violations)
    for key in ("replications", "block_periods_s", "foo", "topology.n_providers"):
        assert key in text


def test_flag_beats_file_beats_environment(tmp_path):
    path = _write(tmp_path, "base_seed: 5\nreplications: 7\n")
    env = Settings(seed=3)
    assert parse_config(settings=env).base_seed == 3
    assert parse_config(path, settings=env).base_seed == 5
    assert parse_config(path, {"seed": 9}, settings=env).base_seed == 9
    assert parse_config(path, {"seed": 9}, settings=env).replications == 7


def test_environment_seed_is_read(monkeypatch):
    monkeypatch.setenv("FEDSIM_SEED", "1234")
    assert parse_config().base_seed == 1234


def test_nested_file_values(tmp_path):
    path = _write(
        tmp_path,
        """
profiles:
  - public
  - name: lab
    kind: private
    block_period_s: 3
    api_latency_s: 0.05
deployment:
  latency: normal:36,2,0
  onboarding_share: 0.3
provider_policy:
  pricing: uniform:5,15
  capacity: {cpu_cores: 16}
complete_tx_mode: on-chain
""",
    )
    config = parse_config(path, {"providers": 3, "deploy_latency": "40"}, settings=Settings())
    assert [p.kind for p in config.profiles] == [ProfileKind.PUBLIC, ProfileKind.PRIVATE]
    assert config.deployment.latency.expected() == 40.0
    assert config.deployment.onboarding_share == 0.3
    assert config.topology.n_providers == 3
    assert config.complete_tx_mode == CompletionMode.ON_CHAIN


def test_complete_tx_flag_both_ways():
    on = parse_config(flags={"complete_tx": True}, settings=Settings())
    off = parse_config(flags={"complete_tx": False}, settings=Settings())
    assert on.complete_tx_mode == CompletionMode.ON_CHAIN
    assert off.complete_tx_mode == CompletionMode.MEASUREMENT_ONLY


def test_missing_or_malformed_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config_file(tmp_path / "absent.yaml")
    with pytest.raises(ConfigurationError):
        load_config_file(_write(tmp_path, "- just\n- a list\n"))
    with pytest.raises(ConfigurationError):
        load_config_file(_write(tmp_path, "key: [unclosed\n"))


def test_bad_csv_flags():
    with pytest.raises(ConfigurationError):
        flag_overrides({"block_periods": "1,two"})
    with pytest.raises(ConfigurationError):
        flag_overrides({"profile": " , "})


def test_unknown_profile_name():
    with pytest.raises(ConfigurationError) as exc:
        parse_config(flags={"profile": "private,mainnet"}, settings=Settings())
    assert "mainnet" in str(exc.value)


def test_resolution_is_deterministic_over_random_partial_configs():
    rng = np.random.default_rng(0)
    keys = {
        "replications": lambda: int(rng.integers(1, 50)),
        "base_seed": lambda: int(rng.integers(0, 2**32)),
        "jobs": lambda: int(rng.integers(1, 4)),
    }
    flag_names = {"replications": "reps", "base_seed": "seed", "jobs": "jobs"}
    for _ in range(200):
        file_part = {k: gen() for k, gen in keys.items() if rng.random() < 0.5}
        flag_part = {flag_names[k]: gen() for k, gen in keys.items() if rng.random() < 0.5}
        resolved = merge(merge({"base_seed": 11}, file_part), flag_overrides(flag_part))
        for key in keys:
            flag = flag_part.get(flag_names[key])
            expected = flag if flag is not None else file_part.get(key)
            if key == "base_seed" and expected is None:
                expected = 11
            assert resolved.get(key) == expected


def test_merge_is_deep_and_non_destructive():
    base = {"topology": {"n_providers": 1}, "replications": 5}
    merged = merge(base, {"topology": {"n_providers": 4}})
    assert merged == {"topology": {"n_providers": 4}, "replications": 5}
    assert base["topology"]["n_providers"] == 1
