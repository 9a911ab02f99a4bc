"""Track node.

This node feeds per-frame detections to a fresh track store in frame
order. Parallel fusion may deliver frames in any order, so they are
sorted first.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

from fruit_census.models.detection import RejectionStats
from fruit_census.services.tracker import run_tracker

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)


def track_detections(state: PipelineState) -> dict[str, Any]:
    """Build tracks from all frames' detections.

    Args:
        state: Current graph state containing frame_detections and config.

    Returns:
        State update dict with tracks, reliable_tracks, and rejection_stats.
    """
    frame_detections = state.get("frame_detections", [])
    config = state["config"]

    stats = RejectionStats()
    for frame in frame_detections:
        stats = stats.merged(frame.stats)

    store = run_tracker(frame_detections, config.tracker)
    reliable = store.reliable_tracks()

    logger.info(
        "track: %d frames, %d detections -> %d tracks (%d reliable)",
        store.frames_processed,
        store.detections_processed,
        len(store.tracks),
        len(reliable),
    )
    if stats.total:
        logger.info("track: %d boxes rejected at depth fusion %s", stats.total, stats.model_dump())

    return {
        "tracks": store.tracks,
        "reliable_tracks": reliable,
        "rejection_stats": stats,
    }
