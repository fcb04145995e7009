"""Shared test fixtures."""

from __future__ import annotations

import pytest

from fedsim.contract.federation import FederationContract
from fedsim.ledger.chain import Ledger
from fedsim.ledger.profiles import builtin_profile
from fedsim.models.domain import Role
from fedsim.models.schemas import ArrivalPhase, CampaignConfig, NetworkProfile
from fedsim.observability.logger import setup_logging
from fedsim.sim.engine import SimEngine
from fedsim.sim.rng import RngStreams


@pytest.fixture(autouse=True)
def _quiet_logging():
    setup_logging("WARNING")
    yield
    setup_logging("WARNING")


@pytest.fixture
def engine():
    return SimEngine()


@pytest.fixture
def streams():
    return RngStreams(seed=1234)


@pytest.fixture
def contract():
    return FederationContract()


@pytest.fixture
def registered_contract():
    """Contract with one consumer and three providers registered."""
    c = FederationContract()
    c.register("consumer", Role.CONSUMER)
    for name in ("p1", "p2", "p3"):
        c.register(name, Role.PROVIDER)
    return c


@pytest.fixture
def private_profile():
    def _make(block_period_s: float = 1.0, api_latency_s: float = 0.0) -> NetworkProfile:
        return NetworkProfile.model_validate(
            {
                **builtin_profile("private").model_dump(),
                "block_period_s": block_period_s,
                "api_latency_s": api_latency_s,
            }
        )

    return _make


@pytest.fixture
def make_ledger(engine, contract, streams):
    def _make(profile: NetworkProfile, *clients: str) -> Ledger:
        ledger = Ledger(engine, profile, contract, streams)
        for address in clients:
            ledger.register_client(address)
        ledger.start()
        return ledger

    return _make


@pytest.fixture
def small_config(tmp_path):
    def _make(**overrides) -> CampaignConfig:
        values = {
            "replications": 3,
            "block_periods_s": [1.0, 20.0],
            "output_dir": tmp_path / "results",
            "arrival_phase": ArrivalPhase.UNIFORM,
        }
        values.update(overrides)
        return CampaignConfig(**values)

    return _make

