"""Non-configurable constants and calibration values."""

from __future__ import annotations

# Block periods swept on the private chain
REFERENCE_BLOCK_PERIODS_S = (1.0, 2.0, 5.0, 10.0, 20.0)
REFERENCE_REPLICATIONS = 100

# Published reference totals (seconds), used by the reproduction script
REFERENCE_PRIVATE_BEST_S = 48.0
REFERENCE_PRIVATE_WORST_S = 92.0
REFERENCE_PUBLIC_S = 91.0
REFERENCE_DEPLOYMENT_S = 36.0

# Calibration constants shared by every profile
CLIENT_OVERHEAD_S = 2.0
PRIVATE_API_LATENCY_S = 0.1

# Public profile calibration
PUBLIC_BLOCK_PERIOD_S = 12.0
PUBLIC_JITTER_S = 2.0
PUBLIC_EXTRA_BLOCKS_MEAN = 0.25
PUBLIC_API_LATENCY_S = 0.3

# Agent defaults
DEFAULT_RUN_TIMEOUT_S = 300.0
DEFAULT_BID_PRICE = 10.0
DEFAULT_REQUIREMENTS = {
    "cpu_cores": 2,
    "ram_gb": 4,
    "image": "nginx",
    "service_type": "LoadBalancer",
}

# Engine horizon for a single run, as a multiple of the run timeout
RUN_HORIZON_FACTOR = 4.0

# Named random streams; one per stochastic component
STREAM_API_LATENCY = "api_latency"
STREAM_BLOCK_INTERVAL = "block_interval"
STREAM_INCLUSION = "inclusion_extra_blocks"
STREAM_DEPLOYMENT = "deployment_latency"
STREAM_DEPLOYMENT_FAILURE = "deployment_failure"
STREAM_BID_PRICING = "bid_pricing"
STREAM_ARRIVAL_PHASE = "arrival_phase"

# CLI exit codes
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3

# Output file names
TIMELINES_CSV = "timelines.csv"
SUMMARY_CSV = "summary.csv"
SUMMARY_JSON = "summary.json"
