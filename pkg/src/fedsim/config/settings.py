"""Process-level configuration via Pydantic Settings. Values driven by FEDSIM_* env vars."""

from __future__ import annotations

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings

DEFAULT_SEED = 20230915


class Settings(BaseSettings):
    # Lowest-precedence seed source; config file and --seed override it
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)

    # Logging
    log_level: str = "WARNING"
    log_format: Literal["json", "console"] = "json"

    # Output
    default_output_dir: str = "results"

    model_config = {"env_file": ".env", "env_prefix": "FEDSIM_", "extra": "ignore"}
