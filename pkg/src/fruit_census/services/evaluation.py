"""Evaluation against ground truth and track overlays.

Matching pairs reliable tracks with ground-truth fruit one-to-one by
ascending center distance. Metrics follow the usual yield-estimation
table: count error, average-weight error, plus precision/recall of the
track set. The frame-sample report counts, for evenly spaced frames,
ground-truth fruit and reprojected tracks in the left half of the image.
"""

from __future__ import annotations

import io
import logging
import math
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from PIL import Image, ImageDraw
from scipy.spatial.distance import cdist

from fruit_census.exceptions import ContractViolationError
from fruit_census.models.detection import FruitClass
from fruit_census.models.evaluation import (
    EvaluationConfig,
    FrameSampleReport,
    FrameSampleRow,
    MatchPair,
    MatchResult,
    Metrics,
    OverlayRecord,
)
from fruit_census.services.artifacts import write_bytes_atomic, write_jsonl_atomic
from fruit_census.services.geometry import project_point

if TYPE_CHECKING:
    from collections.abc import Sequence

    from fruit_census.models.dataset import GroundTruth, GroundTruthFruit
    from fruit_census.models.estimation import YieldReport
    from fruit_census.models.geometry import CameraIntrinsics, Pose6D
    from fruit_census.models.track import Track
    from fruit_census.services.dataset import Dataset

logger = logging.getLogger(__name__)

OVERLAY_FILE = "overlay.jsonl"
OVERLAY_RASTER_DIR = "overlay"

CLASS_COLORS: dict[int, tuple[int, int, int]] = {
    int(FruitClass.STEM): (120, 90, 40),
    int(FruitClass.UNRIPENED): (60, 200, 60),
    int(FruitClass.RIPENED): (230, 40, 40),
    int(FruitClass.LEAF_BRANCH): (30, 120, 30),
    int(FruitClass.FLOWER): (240, 220, 60),
}


def match_to_ground_truth(
    tracks: Sequence[Track],
    fruits: Sequence[GroundTruthFruit],
    radius: float = 0.02,
    duplicate_radius: float = 0.2,
) -> MatchResult:
    """Greedy one-to-one matching of tracks to fruit.

    Candidate pairs within ``radius`` are accepted by ascending distance,
    ties broken by (track id, fruit id), so the result does not depend on
    input order. An unmatched track whose nearest fruit is matched and
    within ``duplicate_radius`` is reported as a duplicate.

    Args:
        tracks: Reliable world-frame tracks.
        fruits: Ground-truth fruit.
        radius: Matching cut-off (meters).
        duplicate_radius: Duplicate attribution cut-off (meters).

    Returns:
        MatchResult.
    """
    if not tracks or not fruits:
        return MatchResult(
            unmatched_tracks=sorted(t.id for t in tracks),
            unmatched_fruits=sorted(f.id for f in fruits),
            radius=radius,
        )

    track_centers = np.array([t.cube.center for t in tracks])
    fruit_centers = np.array([f.center for f in fruits], dtype=np.float64)
    distances = cdist(track_centers, fruit_centers)

    candidates = sorted(
        (float(distances[i, j]), tracks[i].id, fruits[j].id)
        for i, j in zip(*np.nonzero(distances <= radius), strict=True)
    )
    pairs: list[MatchPair] = []
    used_tracks: set[int] = set()
    used_fruits: set[int] = set()
    for dist, track_id, fruit_id in candidates:
        if track_id in used_tracks or fruit_id in used_fruits:
            continue
        pairs.append(MatchPair(track_id=track_id, fruit_id=fruit_id, error=dist))
        used_tracks.add(track_id)
        used_fruits.add(fruit_id)

    duplicates = []
    for i, track in enumerate(tracks):
        if track.id in used_tracks:
            continue
        # nearest fruit, lowest id on ties
        j = min(range(len(fruits)), key=lambda k: (distances[i, k], fruits[k].id))
        if distances[i, j] <= duplicate_radius and fruits[j].id in used_fruits:
            duplicates.append(track.id)

    result = MatchResult(
        pairs=pairs,
        unmatched_tracks=sorted(t.id for t in tracks if t.id not in used_tracks),
        unmatched_fruits=sorted(f.id for f in fruits if f.id not in used_fruits),
        duplicate_tracks=sorted(duplicates),
        radius=radius,
    )
    logger.info(
        "match_to_ground_truth: %d pairs, %d unmatched tracks (%d duplicates), "
        "%d unmatched fruit",
        len(result.pairs),
        len(result.unmatched_tracks),
        result.duplicate_count,
        len(result.unmatched_fruits),
    )
    return result


def percent_error(estimate: float, truth: float) -> float | None:
    """Relative error |estimate - truth| / truth in percent; None when truth is 0.

    Example:
        >>> round(percent_error(94, 89), 1)
        5.6
    """
    if truth == 0:
        return None
    return 100.0 * abs(estimate - truth) / abs(truth)


def compute_metrics(
    report: YieldReport,
    ground_truth: GroundTruth,
    match: MatchResult,
    target_class: int | None = None,
    flight_time: float | None = None,
) -> Metrics:
    """Compare a yield report and its track matching with ground truth.

    Args:
        report: Yield estimate.
        ground_truth: Ground-truth fruit.
        match: Matching of reliable tracks to the ground truth.
        target_class: Class the yield counted; None counts every fruit.
        flight_time: Recording duration in seconds, reported as-is.

    Returns:
        Metrics; ratio fields are None when the ground truth is empty.
    """
    evaluated = [
        f for f in ground_truth.fruits if target_class is None or f.class_id == target_class
    ]
    true_count = len(evaluated)
    weights = [f.weight for f in evaluated if f.weight is not None]
    true_total = math.fsum(weights) if weights else None
    true_avg = true_total / len(weights) if true_total is not None else None

    count_error = percent_error(report.count, true_count)
    avg_error = (
        percent_error(report.average_weight_g, true_avg)
        if report.average_weight_g is not None and true_avg is not None
        else None
    )
    total_error = (
        percent_error(report.total_weight_g, true_total) if true_total is not None else None
    )

    n_tracks = len(match.pairs) + len(match.unmatched_tracks)
    n_fruits = len(match.pairs) + len(match.unmatched_fruits)
    metrics = Metrics(
        estimated_count=report.count,
        true_count=true_count,
        counting_accuracy=None if count_error is None else 100.0 - count_error,
        count_error=count_error,
        estimated_avg_weight=report.average_weight_g,
        true_avg_weight=true_avg,
        avg_weight_error=avg_error,
        weight_accuracy=None if avg_error is None else 100.0 - avg_error,
        total_weight_error=total_error,
        precision=100.0 * len(match.pairs) / n_tracks if n_tracks else None,
        recall=100.0 * len(match.pairs) / n_fruits if n_fruits else None,
        duplicate_tracks=match.duplicate_count,
        flight_time=flight_time,
    )
    logger.info(
        "compute_metrics: count %d vs %d, counting accuracy %s",
        metrics.estimated_count,
        metrics.true_count,
        "n/a" if metrics.counting_accuracy is None else f"{metrics.counting_accuracy:.1f}%",
    )
    return metrics


def _in_left_half(
    point: Sequence[float] | np.ndarray, pose: Pose6D, intr: CameraIntrinsics
) -> tuple[float, float] | None:
    """Projection of a world point if it has valid depth and lands left of center."""
    camera_z = float(pose.world_to_camera(np.asarray(point, dtype=np.float64))[2])
    if not intr.min_depth < camera_z <= intr.max_depth:
        return None
    pixel = project_point(point, pose, intr)
    if pixel is None:
        return None
    u, v = pixel
    if not (0 <= u < intr.width / 2 and 0 <= v < intr.height):
        return None
    return pixel


def sampled_frame_ids(dataset: Dataset, config: EvaluationConfig) -> list[int]:
    """Frame ids at ``sample_interval`` spacing starting at ``sample_start``."""
    rate = dataset.manifest.frame_rate
    step = max(1, round(config.sample_interval * rate))
    start = round(config.sample_start * rate)
    ids = [
        r.frame_id
        for r in sorted(dataset.poses, key=lambda r: r.frame_id)
        if r.frame_id >= start and (r.frame_id - start) % step == 0
    ]
    return ids[: config.sample_count] if config.sample_count is not None else ids


def frame_sample_report(
    dataset: Dataset,
    tracks: Sequence[Track],
    config: EvaluationConfig | None = None,
) -> FrameSampleReport:
    """Count visible fruit and reprojected tracks on sampled frames.

    A fruit or track counts in a frame when its center has depth within the
    camera window and projects into the left half of the image.

    Args:
        dataset: Dataset with ground truth.
        tracks: Reliable tracks.
        config: Sampling parameters, class filter, and positive criterion.

    Returns:
        FrameSampleReport.

    Raises:
        ContractViolationError: If the dataset has no ground truth.
    """
    config = config or EvaluationConfig()
    if dataset.ground_truth is None:
        raise ContractViolationError("frame_sample_report needs ground truth")
    intr = dataset.intrinsics
    fruits = [
        f
        for f in dataset.ground_truth.fruits
        if config.sample_class is None or f.class_id == config.sample_class
    ]
    candidates = [
        t for t in tracks if config.sample_class is None or t.class_id == config.sample_class
    ]

    rows = []
    for frame_id in sampled_frame_ids(dataset, config):
        pose = dataset.pose(frame_id)
        assert pose is not None
        fruit_pixels = [p for f in fruits if (p := _in_left_half(f.center, pose, intr))]
        track_pixels = [p for t in candidates if (p := _in_left_half(t.cube.center, pose, intr))]
        if config.positive_max_px is not None:
            limit = config.positive_max_px
            track_pixels = [
                tp for tp in track_pixels if any(math.dist(tp, fp) <= limit for fp in fruit_pixels)
            ]
        rows.append(
            FrameSampleRow(
                frame_id=frame_id,
                timestamp=frame_id / dataset.manifest.frame_rate,
                visible_fruits=len(fruit_pixels),
                positive_tracks=len(track_pixels),
            )
        )

    report = FrameSampleReport.from_rows(rows)
    logger.info(
        "frame_sample_report: %d frames, %d visible fruit, %d positive tracks",
        len(rows),
        report.total_visible,
        report.total_positive,
    )
    return report


def overlay_records(dataset: Dataset, tracks: Sequence[Track]) -> list[OverlayRecord]:
    """Projected rectangle of every track in every frame where it is visible.

    The rectangle is the track's width and height at its center depth. A
    track is visible when its center is in front of the camera and the
    rectangle overlaps the image.
    """
    intr = dataset.intrinsics
    records = []
    for pose_record in sorted(dataset.poses, key=lambda r: r.frame_id):
        pose = pose_record.pose
        for track in sorted(tracks, key=lambda t: t.id):
            depth = float(pose.world_to_camera(track.cube.center)[2])
            pixel = project_point(track.cube.center, pose, intr)
            if pixel is None:
                continue
            u, v = pixel
            half_w = intr.fx * track.cube.w / (2 * depth)
            half_h = intr.fy * track.cube.h / (2 * depth)
            u_min, u_max, v_min, v_max = u - half_w, u + half_w, v - half_h, v + half_h
            if u_max <= 0 or u_min >= intr.width or v_max <= 0 or v_min >= intr.height:
                continue
            records.append(
                OverlayRecord(
                    frame_id=pose_record.frame_id,
                    track_id=track.id,
                    class_id=track.class_id,
                    u_min=u_min,
                    v_min=v_min,
                    u_max=u_max,
                    v_max=v_max,
                    depth=depth,
                )
            )
    return records


def render_overlay(
    frame_records: Sequence[OverlayRecord], intr: CameraIntrinsics
) -> Image.Image:
    """Flat-color image of one frame's track rectangles labelled with ids."""
    image = Image.new("RGB", (intr.width, intr.height), (0, 0, 0))
    draw = ImageDraw.Draw(image)
    for record in frame_records:
        color = CLASS_COLORS.get(record.class_id, (255, 255, 255))
        draw.rectangle(
            [record.u_min, record.v_min, record.u_max, record.v_max], outline=color, width=2
        )
        draw.text((record.u_min, record.v_min - 12), str(record.track_id), fill=color)
    return image


def export_overlay(
    dataset: Dataset,
    tracks: Sequence[Track],
    out_dir: Path | str,
    raster: bool = False,
) -> list[OverlayRecord]:
    """Write overlay.jsonl, plus one PNG per frame when ``raster`` is set.

    Args:
        dataset: Dataset supplying poses and intrinsics.
        tracks: World-frame tracks.
        out_dir: Output directory.
        raster: Also render overlay/%06d.png per frame.

    Returns:
        The written records.
    """
    out_path = Path(out_dir)
    records = overlay_records(dataset, tracks)
    write_jsonl_atomic(out_path / OVERLAY_FILE, records)

    if raster:
        by_frame: dict[int, list[OverlayRecord]] = {r.frame_id: [] for r in dataset.poses}
        for record in records:
            by_frame[record.frame_id].append(record)
        for frame_id, frame_records in sorted(by_frame.items()):
            image = render_overlay(frame_records, dataset.intrinsics)
            buffer = _png_bytes(image)
            write_bytes_atomic(out_path / OVERLAY_RASTER_DIR / f"{frame_id:06d}.png", buffer)

    logger.info(
        "export_overlay: %d records over %d frames -> %s%s",
        len(records),
        len(dataset.poses),
        out_path / OVERLAY_FILE,
        " (+ raster)" if raster else "",
    )
    return records


def _png_bytes(image: Image.Image) -> bytes:
    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    return buffer.getvalue()
