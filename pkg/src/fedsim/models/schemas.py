"""Pydantic models for experiment configuration and (de)serialization."""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

from fedsim.config import constants
from fedsim.config.settings import DEFAULT_SEED

_MAX_RESAMPLES = 1000


class Distribution(BaseModel):
    """A sampling law over seconds, prices, or block counts."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["constant", "uniform", "normal", "exponential", "geometric"] = "constant"
    value: float = 0.0
    low: float = 0.0
    high: float = 0.0
    mean: float = 0.0
    std: float = 0.0
    minimum: float | None = None  # truncation point for "normal"

    @model_validator(mode="after")
    def _check_parameters(self) -> Distribution:
        if self.kind == "uniform" and self.low > self.high:
            raise ValueError(f"uniform low ({self.low}) exceeds high ({self.high})")
        if self.kind == "normal" and self.std < 0:
            raise ValueError("normal std must be non-negative")
        if self.kind in ("exponential", "geometric") and self.mean < 0:
            raise ValueError(f"{self.kind} mean must be non-negative")
        return self

    @classmethod
    def constant(cls, value: float) -> Distribution:
        return cls(kind="constant", value=value)

    @classmethod
    def parse(cls, text: str) -> Distribution:
        """Parse ``kind:p1,p2[,p3]``; a bare number is a constant."""
        text = text.strip()
        if ":" not in text:
            return cls.constant(float(text))
        kind, _, raw = text.partition(":")
        kind = kind.strip().lower()
        params = [float(p) for p in raw.split(",") if p.strip()]
        if kind == "constant" and len(params) == 1:
            return cls.constant(params[0])
        if kind == "uniform" and len(params) == 2:
            return cls(kind="uniform", low=params[0], high=params[1])
        if kind == "normal" and len(params) in (2, 3):
            minimum = params[2] if len(params) == 3 else None
            return cls(kind="normal", mean=params[0], std=params[1], minimum=minimum)
        if kind in ("exponential", "geometric") and len(params) == 1:
            return cls(kind=kind, mean=params[0])
        raise ValueError(f"cannot parse distribution spec {text!r}")

    @property
    def is_zero(self) -> bool:
        return self.kind == "constant" and self.value == 0.0

    @property
    def is_deterministic(self) -> bool:
        return (
            self.kind == "constant"
            or (self.kind == "uniform" and self.low == self.high)
            or (self.kind == "normal" and self.std == 0)
            or (self.kind in ("exponential", "geometric") and self.mean == 0)
        )

    def expected(self) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "uniform":
            return (self.low + self.high) / 2
        return self.mean

    def variance(self) -> float:
        if self.kind == "uniform":
            return (self.high - self.low) ** 2 / 12
        if self.kind == "normal":
            return self.std**2
        if self.kind == "exponential":
            return self.mean**2
        if self.kind == "geometric":
            return self.mean * (1 + self.mean)
        return 0.0

    def lower_bound(self) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "uniform":
            return self.low
        if self.kind == "normal":
            return self.minimum if self.minimum is not None else -math.inf
        return 0.0

    def sample(self, rng: np.random.Generator) -> float:
        if self.is_deterministic:
            return self.expected()
        if self.kind == "uniform":
            return float(rng.uniform(self.low, self.high))
        if self.kind == "exponential":
            return float(rng.exponential(self.mean))
        if self.kind == "geometric":
            # numpy's geometric counts trials (support 1, 2, ...); shift to failures
            return float(rng.geometric(1.0 / (1.0 + self.mean)) - 1)
        draw = float(rng.normal(self.mean, self.std))
        if self.minimum is None:
            return draw
        for _ in range(_MAX_RESAMPLES):
            if draw > self.minimum:
                return draw
            draw = float(rng.normal(self.mean, self.std))
        return max(draw, math.nextafter(self.minimum, math.inf))

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.value:g}"
        if self.kind == "uniform":
            return f"uniform:{self.low:g},{self.high:g}"
        if self.kind == "normal":
            tail = f",{self.minimum:g}" if self.minimum is not None else ""
            return f"normal:{self.mean:g},{self.std:g}{tail}"
        return f"{self.kind}:{self.mean:g}"


def _coerce_distribution(value: Any) -> Any:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return Distribution.constant(float(value))
    if isinstance(value, str):
        return Distribution.parse(value)
    return value


DistributionField = Annotated[Distribution, BeforeValidator(_coerce_distribution)]
ZERO = Distribution.constant(0.0)


class ProfileKind(str, Enum):
    PRIVATE = "Private"
    PUBLIC = "Public"


class NetworkProfile(BaseModel):
    """Parameters distinguishing a private PoA chain from a public one."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    kind: ProfileKind
    block_period_s: float = Field(gt=0)
    block_jitter: DistributionField = ZERO
    inclusion_extra_blocks: DistributionField = ZERO
    api_latency_s: DistributionField = ZERO
    provenance: dict[str, str] = Field(default_factory=dict)

    @field_validator("kind", mode="before")
    @classmethod
    def _normalize_kind(cls, value: Any) -> Any:
        if isinstance(value, str):
            return value.strip().capitalize()
        return value

    @model_validator(mode="after")
    def _check_profile(self) -> NetworkProfile:
        if self.kind == ProfileKind.PRIVATE:
            if not self.block_jitter.is_zero:
                raise ValueError("a Private profile cannot have block jitter")
            if not self.inclusion_extra_blocks.is_zero:
                raise ValueError("a Private profile cannot have inclusion extra blocks")
        if self.block_period_s + self.block_jitter.lower_bound() <= 0:
            raise ValueError("block jitter can produce non-positive block intervals")
        if self.api_latency_s.lower_bound() < 0:
            raise ValueError("api latency must be non-negative")
        if self.inclusion_extra_blocks.kind not in ("constant", "geometric"):
            raise ValueError("inclusion extra blocks must be constant or geometric")
        return self

    def with_block_period(self, block_period_s: float) -> NetworkProfile:
        return NetworkProfile.model_validate(
            {**self.model_dump(), "block_period_s": block_period_s}
        )


class DeploymentModel(BaseModel):
    """Orchestrator stub: OSM onboarding plus Kubernetes service creation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    latency: DistributionField = Distribution.constant(constants.REFERENCE_DEPLOYMENT_S)
    onboarding_share: float | None = Field(default=None, gt=0, lt=1)
    failure_probability: float = Field(default=0.0, ge=0, le=1)

    @field_validator("latency")
    @classmethod
    def _strictly_positive(cls, value: Distribution) -> Distribution:
        bound = value.lower_bound()
        if value.kind in ("constant", "uniform") and bound <= 0:
            raise ValueError("deployment latency draws must be strictly positive")
        if bound < 0:
            raise ValueError("deployment latency must be truncated at a non-negative minimum")
        return value


class ConsumerPolicy(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    bid_wait_s: float = Field(default=0.0, ge=0)
    requirements_template: dict[str, Any] = Field(
        default_factory=lambda: dict(constants.DEFAULT_REQUIREMENTS)
    )


class ProviderPolicy(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    pricing: DistributionField = Distribution.constant(constants.DEFAULT_BID_PRICE)
    capacity: dict[str, float] = Field(default_factory=dict)

    @field_validator("pricing")
    @classmethod
    def _non_negative(cls, value: Distribution) -> Distribution:
        if value.lower_bound() < 0:
            raise ValueError("prices must be non-negative (truncate a normal law at 0)")
        return value

    def accepts(self, requirements: dict[str, Any]) -> bool:
        """Default filter: every capped numeric requirement fits the capacity."""
        for key, cap in self.capacity.items():
            wanted = requirements.get(key)
            if isinstance(wanted, (int, float)) and not isinstance(wanted, bool) and wanted > cap:
                return False
        return True


class Topology(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_consumers: Literal[1] = 1
    n_providers: int = Field(default=1, ge=1)


class CompletionMode(str, Enum):
    ON_CHAIN = "on-chain"
    MEASUREMENT_ONLY = "measurement-only"


class ArrivalPhase(str, Enum):
    UNIFORM = "uniform"
    ALIGNED = "aligned"


def _default_profiles() -> list[NetworkProfile]:
    from fedsim.ledger.profiles import builtin_profile

    return [builtin_profile("private")]


def _resolve_profile(value: Any) -> Any:
    if isinstance(value, str):
        from fedsim.exceptions import ConfigurationError
        from fedsim.ledger.profiles import builtin_profile

        try:
            return builtin_profile(value)
        except ConfigurationError as e:
            raise ValueError("; ".join(e.violations)) from e
    return value


ProfileField = Annotated[NetworkProfile, BeforeValidator(_resolve_profile)]


class CampaignConfig(BaseModel):
    """One benchmark campaign: profiles x block periods x replications."""

    model_config = ConfigDict(extra="forbid")

    profiles: list[ProfileField] = Field(default_factory=_default_profiles, min_length=1)
    block_periods_s: list[float] = Field(
        default_factory=lambda: list(constants.REFERENCE_BLOCK_PERIODS_S), min_length=1
    )
    replications: int = Field(default=constants.REFERENCE_REPLICATIONS, ge=1)
    base_seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    topology: Topology = Field(default_factory=Topology)
    deployment: DeploymentModel = Field(default_factory=DeploymentModel)
    consumer_policy: ConsumerPolicy = Field(default_factory=ConsumerPolicy)
    provider_policy: ProviderPolicy = Field(default_factory=ProviderPolicy)
    output_dir: Path = Path("results")
    complete_tx_mode: CompletionMode = CompletionMode.MEASUREMENT_ONLY
    client_overhead_s: float = Field(default=constants.CLIENT_OVERHEAD_S, ge=0)
    timeout_s: float = Field(default=constants.DEFAULT_RUN_TIMEOUT_S, gt=0)
    arrival_phase: ArrivalPhase = ArrivalPhase.UNIFORM
    jobs: int = Field(default=1, ge=1)

    @field_validator("block_periods_s")
    @classmethod
    def _positive_periods(cls, value: list[float]) -> list[float]:
        bad = [p for p in value if not p > 0]
        if bad:
            raise ValueError(f"block periods must be > 0, got {bad}")
        return value

    @field_validator("profiles")
    @classmethod
    def _unique_names(cls, value: list[NetworkProfile]) -> list[NetworkProfile]:
        names = [p.name for p in value]
        if len(names) != len(set(names)):
            raise ValueError(f"profile names must be unique, got {names}")
        return value

    def run_points(self) -> list[tuple[NetworkProfile, float]]:
        """(profile, block period) pairs. Public profiles run at their own period."""
        points: list[tuple[NetworkProfile, float]] = []
        for profile in self.profiles:
            if profile.kind == ProfileKind.PRIVATE:
                for bp in self.block_periods_s:
                    points.append((profile.with_block_period(bp), bp))
            else:
                points.append((profile, profile.block_period_s))
        return points
