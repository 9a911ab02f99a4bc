"""Detect frame node.

This node lifts one synchronized frame's boxes to world-frame 3D
detections. It is a Send target, so frames are fused in parallel and
results are appended through the add reducer.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

from fruit_census.services.detect3d import detections_for_frame

if TYPE_CHECKING:
    from fruit_census.models.dataset import SyncedFrame
    from fruit_census.services.dataset import Dataset

logger = logging.getLogger(__name__)


def detect_frame(state: dict[str, Any]) -> dict[str, Any]:
    """Fuse one frame's boxes with its depth frame and pose.

    Args:
        state: Send state containing:
            - frame: SyncedFrame to process
            - dataset: Dataset supplying the depth frame and intrinsics

    Returns:
        State update dict with frame_detections containing one entry.

    Raises:
        DatasetError: If the frame's depth cannot be read.
    """
    frame: SyncedFrame = state["frame"]
    dataset: Dataset = state["dataset"]

    depth = dataset.depth(frame.frame_id)
    result = detections_for_frame(
        frame.frame_id, frame.pose, frame.detections, depth, dataset.intrinsics
    )

    logger.debug(
        "detect_frame: frame %d: %d boxes -> %d detections",
        frame.frame_id,
        len(frame.detections),
        len(result.detections),
    )
    return {
        "frame_detections": [result],
    }
