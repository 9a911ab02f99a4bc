"""2D box + depth + pose fusion into world-frame detections.

Each box is lifted to 3D from the median raw depth of the pixels it
covers. Invalid pixels (0) take part in the median, so a box over mostly
missing depth is rejected instead of being placed at a misleading depth.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from fruit_census.exceptions import ContractViolationError
from fruit_census.models.dataset import DEPTH_INVALID
from fruit_census.models.detection import (
    Detection3D,
    FrameDetections,
    RejectionCause,
    RejectionStats,
)
from fruit_census.services.geometry import back_project, roi_bounds, to_world

if TYPE_CHECKING:
    from collections.abc import Sequence

    from fruit_census.models.dataset import DepthFrame
    from fruit_census.models.geometry import BBox2D, CameraIntrinsics, Pose6D

logger = logging.getLogger(__name__)


def roi_median_raw(depth: DepthFrame, bbox: BBox2D) -> int | None:
    """Median raw depth value over a box's clamped ROI.

    All pixels are included, invalid ones too. The median is the single
    element at index n // 2 of the ascending sort, never an average.

    Returns:
        Raw depth units, or None if the clamped ROI is empty.
    """
    bounds = roi_bounds(bbox, depth.width, depth.height)
    if bounds is None:
        return None
    row0, row1, col0, col1 = bounds
    roi = depth.values[row0:row1, col0:col1].ravel()
    n = roi.size
    return int(np.partition(roi, n // 2)[n // 2])


def _classify_median(
    depth: DepthFrame, bbox: BBox2D, intr: CameraIntrinsics
) -> tuple[float | None, RejectionCause | None]:
    raw = roi_median_raw(depth, bbox)
    if raw is None:
        return None, RejectionCause.EMPTY_ROI
    if raw == DEPTH_INVALID:
        return None, RejectionCause.INVALID_MEDIAN
    z = raw * intr.depth_scale
    if not intr.depth_in_range(z):
        return None, RejectionCause.OUT_OF_RANGE
    return z, None


def roi_median_depth(depth: DepthFrame, bbox: BBox2D, intr: CameraIntrinsics) -> float | None:
    """Median depth inside a box, in meters.

    Args:
        depth: Depth frame.
        bbox: Detector box; clamped to the image.
        intr: Camera intrinsics (depth scale and window).

    Returns:
        Median depth in meters, or None when the ROI is empty, the median
        is invalid, or it falls outside [min_depth, max_depth].

    Example:
        A 5-pixel ROI {0, 440, 450, 460, 470} with depth_scale 0.001
        gives 0.45 m; {0, 0, 0, 450, 500} gives None.
    """
    z, _ = _classify_median(depth, bbox, intr)
    return z


def make_detection(
    bbox: BBox2D,
    depth: DepthFrame,
    intr: CameraIntrinsics,
    pose: Pose6D,
    stats: RejectionStats | None = None,
) -> Detection3D | None:
    """Fuse one box with its depth frame and pose.

    Args:
        bbox: Detector box.
        depth: Depth frame of the same frame.
        intr: Camera intrinsics.
        pose: Camera-to-world pose of the frame.
        stats: Optional counters; the rejection cause is recorded here.

    Returns:
        World-frame detection, or None when the depth is rejected.

    Raises:
        ContractViolationError: If the box and depth frame disagree on frame_id.
    """
    if bbox.frame_id != depth.frame_id:
        raise ContractViolationError(
            f"bbox frame_id {bbox.frame_id} != depth frame_id {depth.frame_id}"
        )
    z, cause = _classify_median(depth, bbox, intr)
    if z is None:
        if stats is not None and cause is not None:
            stats.record(cause)
        return None
    return Detection3D(
        cube=to_world(back_project(bbox, z, intr), pose),
        class_id=bbox.class_id,
        frame_id=bbox.frame_id,
        bbox=bbox,
    )


def detections_for_frame(
    frame_id: int,
    pose: Pose6D,
    boxes: Sequence[BBox2D],
    depth: DepthFrame,
    intr: CameraIntrinsics,
) -> FrameDetections:
    """Lift every box of one synchronized frame.

    Output order follows input order; rejected boxes are counted by cause.

    Args:
        frame_id: Frame being processed.
        pose: Camera pose of the frame.
        boxes: Detector boxes of the frame.
        depth: Depth frame of the frame.
        intr: Camera intrinsics.

    Returns:
        FrameDetections with detections and rejection stats.
    """
    stats = RejectionStats()
    detections = []
    for bbox in boxes:
        detection = make_detection(bbox, depth, intr, pose, stats)
        if detection is not None:
            detections.append(detection)

    if stats.total:
        logger.debug(
            "detections_for_frame: frame %d: %d of %d boxes rejected %s",
            frame_id,
            stats.total,
            len(boxes),
            stats.model_dump(),
        )
    return FrameDetections(frame_id=frame_id, detections=detections, stats=stats)
