"""Export artifacts node.

This node writes every result present in the state to the output
directory. Each file is written atomically.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from fruit_census.services.artifacts import write_json_atomic
from fruit_census.services.dataset import write_dataset, write_tracks
from fruit_census.services.evaluation import OVERLAY_FILE, export_overlay

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)

DATASET_SUBDIR = "dataset"
TRACKS_FILE = "tracks.jsonl"
YIELD_REPORT_FILE = "yield_report.json"
METRICS_FILE = "metrics.json"
FRAME_SAMPLES_FILE = "frame_samples.json"
CONFIG_FILE = "config.json"


def export_artifacts(state: PipelineState) -> dict[str, Any]:
    """Write run artifacts under out_dir.

    Args:
        state: Final graph state.

    Returns:
        State update dict with the written artifact paths.
    """
    out_dir = state.get("out_dir")
    if not out_dir:
        logger.debug("export: no output directory, nothing written")
        return {"artifacts": []}

    out = Path(out_dir)
    config = state["config"]
    written: list[Path] = [write_json_atomic(out / CONFIG_FILE, config)]

    if state.get("simulated"):
        written.append(write_dataset(state["dataset"], out / DATASET_SUBDIR))

    written.append(write_tracks(state.get("reliable_tracks", []), out / TRACKS_FILE))

    if "yield_report" in state:
        written.append(write_json_atomic(out / YIELD_REPORT_FILE, state["yield_report"]))
    if "metrics" in state:
        written.append(write_json_atomic(out / METRICS_FILE, state["metrics"]))
        written.append(write_json_atomic(out / FRAME_SAMPLES_FILE, state["frame_samples"]))
        export_overlay(
            state["dataset"],
            state.get("reliable_tracks", []),
            out,
            raster=config.evaluation.overlay_raster,
        )
        written.append(out / OVERLAY_FILE)

    logger.info("export: %d artifacts written to %s", len(written), out)
    return {"artifacts": [str(p) for p in written]}
