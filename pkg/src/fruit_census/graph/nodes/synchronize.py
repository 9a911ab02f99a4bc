"""Synchronize frames node.

This node joins poses, detections, and depth frames on frame id and emits
the usable frames for parallel 3D detection.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)


def synchronize_frames(state: PipelineState) -> dict[str, Any]:
    """Join the dataset's records by frame id.

    Parallel 3D detection is handled by a conditional edge that creates
    Send objects for each synchronized frame.

    Args:
        state: Current graph state containing the dataset.

    Returns:
        State update dict with sync and any join problems as errors.
    """
    sync = state["dataset"].synchronize()

    logger.info(
        "synchronize: %d frames, %d detections",
        len(sync.frames),
        sync.detection_count,
    )

    errors = []
    if sync.skipped_frames:
        errors.append(f"{sync.skipped_frames} depth frames without a pose skipped")
    if sync.missing_depth:
        errors.append(f"{sync.missing_depth} poses without a depth frame skipped")
    if sync.dropped_detections:
        errors.append(f"{sync.dropped_detections} detections without a usable frame dropped")

    return {
        "sync": sync,
        "errors": errors,
    }
