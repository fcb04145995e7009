"""Blockchain federation simulator: PoA ledger, federation contract, block-period benchmarks."""

__version__ = "1.0.0"
