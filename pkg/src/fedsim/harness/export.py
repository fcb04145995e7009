"""Result files: timelines.csv, summary.csv and summary.json."""

from __future__ import annotations

import csv
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from fedsim.config import constants
from fedsim.exceptions import ExportError
from fedsim.harness.metrics import phase_durations
from fedsim.models.domain import PHASE_ORDER, PhaseStats, PhaseTimeline
from fedsim.models.schemas import CampaignConfig
from fedsim.observability.logger import get_logger

logger = get_logger("export")

TIMELINE_COLUMNS = ("run_id", "profile", "block_period_s", "phase", "duration_s", "failed")
SUMMARY_COLUMNS = (
    "profile",
    "block_period_s",
    "phase",
    "mean_s",
    "stddev_s",
    "p50_s",
    "p95_s",
    "n_runs",
)


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def timeline_rows(timelines: Sequence[PhaseTimeline]) -> list[list[str]]:
    rows = []
    for t in timelines:
        durations = phase_durations(t)
        for phase in PHASE_ORDER:
            rows.append(
                [
                    t.run_id,
                    t.profile_name,
                    f"{t.block_period_s:g}",
                    phase.value,
                    _fmt(durations.get(phase)),
                    "true" if t.failed else "false",
                ]
            )
    return rows


def summary_rows(stats: Sequence[PhaseStats]) -> list[list[str]]:
    return [
        [
            s.profile_name,
            f"{s.block_period_s:g}",
            s.phase,
            _fmt(s.mean_s),
            _fmt(s.stddev_s),
            _fmt(s.p50_s),
            _fmt(s.p95_s),
            str(s.n_runs),
        ]
        for s in stats
    ]


def summary_document(
    stats: Sequence[PhaseStats], timelines: Sequence[PhaseTimeline], config: CampaignConfig
) -> dict[str, Any]:
    return {
        "base_seed": config.base_seed,
        "config": config.model_dump(mode="json"),
        "runs": len(timelines),
        "failed_runs": sum(1 for t in timelines if t.failed),
        "stats": [
            {
                "profile": s.profile_name,
                "block_period_s": s.block_period_s,
                "phase": s.phase,
                "mean_s": s.mean_s,
                "stddev_s": s.stddev_s,
                "p50_s": s.p50_s,
                "p95_s": s.p95_s,
                "n_runs": s.n_runs,
            }
            for s in stats
        ],
    }


def _write_csv(path: Path, header: Sequence[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def export(
    stats: Sequence[PhaseStats],
    timelines: Sequence[PhaseTimeline],
    config: CampaignConfig,
    output_dir: str | Path | None = None,
) -> list[Path]:
    """Write the three result files and return their paths."""
    out = Path(output_dir) if output_dir is not None else Path(config.output_dir)
    paths = [
        out / constants.TIMELINES_CSV,
        out / constants.SUMMARY_CSV,
        out / constants.SUMMARY_JSON,
    ]
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(paths[0], TIMELINE_COLUMNS, timeline_rows(timelines))
        _write_csv(paths[1], SUMMARY_COLUMNS, summary_rows(stats))
        with open(paths[2], "w", encoding="utf-8") as f:
            json.dump(summary_document(stats, timelines, config), f, indent=2)
            f.write("\n")
    except OSError as e:
        raise ExportError(f"cannot write results to {out}: {e}") from e
    logger.info("results_written", output_dir=str(out), files=[p.name for p in paths])
    return paths
