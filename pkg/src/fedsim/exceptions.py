"""Custom exception hierarchy for the federation simulator."""

from __future__ import annotations


class FedSimError(Exception):
    """Base exception for all simulator errors."""


class SimulationError(FedSimError):
    """Error raised by the discrete-event engine."""


class ClockViolationError(SimulationError):
    """An event was scheduled before the current virtual time."""

    def __init__(self, fire_at: float, now: float) -> None:
        super().__init__(f"cannot schedule at t={fire_at} when clock is at t={now}")
        self.fire_at = fire_at
        self.now = now


class LedgerError(FedSimError):
    """Error raised by the simulated ledger."""


class UnknownClientError(LedgerError):
    """A transaction was submitted by a sender the ledger does not know."""


class ContractRevert(FedSimError):
    """A contract call failed a precondition; state is left untouched."""

    def __init__(self, method: str, reason: str) -> None:
        super().__init__(f"{method} reverted: {reason}")
        self.method = method
        self.reason = reason


class RecordNotFoundError(FedSimError):
    """View call for a service id the contract has never seen."""


class DeploymentError(FedSimError):
    """The orchestrator stub failed to instantiate a service."""


class ConfigurationError(FedSimError):
    """Invalid campaign configuration. Carries every violation found."""

    def __init__(self, violations: list[str]) -> None:
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(violations))
        self.violations = violations


class ExportError(FedSimError):
    """Results could not be written to the output directory."""
