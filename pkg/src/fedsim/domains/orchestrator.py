"""Orchestrator stub: service instantiation modeled as a latency draw."""

from __future__ import annotations

import hashlib
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from fedsim.config import constants
from fedsim.exceptions import DeploymentError
from fedsim.models.domain import EndpointInfo
from fedsim.models.schemas import DeploymentModel
from fedsim.observability.logger import get_logger
from fedsim.observability.tracing import RunTrace
from fedsim.sim.engine import EventHandle, SimEngine
from fedsim.sim.rng import RngStreams

logger = get_logger("orchestrator")


@dataclass(frozen=True)
class DeploymentOutcome:
    service_id: str
    endpoint: EndpointInfo
    latency_s: float
    onboarding_s: float | None = None
    k8s_create_s: float | None = None

    def breakdown(self) -> dict[str, float]:
        parts = {"latency_s": self.latency_s}
        if self.onboarding_s is not None and self.k8s_create_s is not None:
            parts["onboarding_s"] = self.onboarding_s
            parts["k8s_create_s"] = self.k8s_create_s
        return parts


def synthesize_endpoint(service_id: str, seed: int) -> EndpointInfo:
    """Placeholder endpoint, a pure function of (service_id, seed)."""
    digits = "".join(ch for ch in service_id if ch.isdigit())
    subnet = int(digits) % 256 if digits else 0
    tag = hashlib.sha256(f"{seed}:{service_id}".encode()).hexdigest()[:8]
    return EndpointInfo(
        external_ip=f"10.0.{subnet}.1",
        port=80,
        descriptor=f"nginx-lb-{tag}",
    )


class Orchestrator:
    """Stands in for OSM descriptor onboarding plus Kubernetes service creation."""

    def __init__(
        self,
        engine: SimEngine,
        model: DeploymentModel,
        rng: RngStreams,
        owner: str,
        trace: RunTrace | None = None,
    ) -> None:
        self._engine = engine
        self.model = model
        self._owner = owner
        self._seed = rng.seed
        self._trace = trace
        self._latency_rng = rng.stream(f"{constants.STREAM_DEPLOYMENT}:{owner}")
        self._failure_rng = rng.stream(f"{constants.STREAM_DEPLOYMENT_FAILURE}:{owner}")
        self.deployments = 0

    def deploy_service(
        self,
        service_id: str,
        requirements: dict[str, Any],
        on_done: Callable[[DeploymentOutcome], None],
        on_failed: Callable[[DeploymentError], None],
    ) -> EventHandle:
        latency = self.model.latency.sample(self._latency_rng)
        if latency <= 0:
            raise DeploymentError(f"non-positive deployment latency {latency} for {service_id}")
        fails = (
            self.model.failure_probability > 0
            and float(self._failure_rng.random()) < self.model.failure_probability
        )
        self.deployments += 1
        self._narrate(
            "deployment_started",
            service_id=service_id,
            image=requirements.get("image", "?"),
            latency_s=round(latency, 3),
        )

        if fails:

            def _fail() -> None:
                error = DeploymentError(f"instantiation of {service_id} failed on {self._owner}")
                self._narrate("deployment_failed", service_id=service_id)
                logger.warning("deployment_failed", service_id=service_id, owner=self._owner)
                on_failed(error)

            return self._engine.schedule_after(latency, "deployment_failed", _fail)

        outcome = self._outcome(service_id, latency)

        def _finish() -> None:
            self._narrate("deployment_finished", service_id=service_id,
                          endpoint=f"{outcome.endpoint.external_ip}:{outcome.endpoint.port}")
            on_done(outcome)

        return self._engine.schedule_after(latency, "deployment_finished", _finish)

    def _outcome(self, service_id: str, latency: float) -> DeploymentOutcome:
        endpoint = synthesize_endpoint(service_id, self._seed)
        share = self.model.onboarding_share
        if share is None:
            return DeploymentOutcome(service_id=service_id, endpoint=endpoint, latency_s=latency)
        onboarding = latency * share
        return DeploymentOutcome(
            service_id=service_id,
            endpoint=endpoint,
            latency_s=latency,
            onboarding_s=onboarding,
            k8s_create_s=latency - onboarding,
        )

    def _narrate(self, event: str, **detail) -> None:
        if self._trace is not None:
            self._trace.record(self._engine.now, "orchestrator", event, owner=self._owner, **detail)
