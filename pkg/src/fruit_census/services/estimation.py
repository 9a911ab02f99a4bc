"""Yield estimation from reliable tracks.

Tracks are filtered by region, volume, and class (first failing cause
wins), then each kept track's height is mapped to grams with a
polynomial weight model.

Pure computation - no I/O.
"""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from fruit_census.exceptions import ContractViolationError, SingularSystemError
from fruit_census.models.estimation import (
    FilterStats,
    TrackWeight,
    WeightModel,
    YieldConfig,
    YieldReport,
)
from fruit_census.services.geometry import cube_volume
from fruit_census.services.tracker import track_class

if TYPE_CHECKING:
    from collections.abc import Sequence

    from fruit_census.models.estimation import WeightModelName
    from fruit_census.models.track import Track

logger = logging.getLogger(__name__)

METERS_TO_MM = 1000.0


def filter_tracks(
    tracks: Sequence[Track], config: YieldConfig
) -> tuple[list[Track], FilterStats]:
    """Keep tracks inside the region, large enough, and of the target class.

    Rejections are attributed to the first failing test in the order
    region, volume, class.

    Args:
        tracks: Reliable tracks.
        config: Yield configuration.

    Returns:
        Kept tracks (input order) and rejection counts.
    """
    kept: list[Track] = []
    region = volume = wrong_class = 0
    for track in tracks:
        if not config.region.contains(track.cube.center):
            region += 1
        elif cube_volume(track.cube) < config.min_volume:
            volume += 1
        elif config.target_class is not None and track_class(track) != config.target_class:
            wrong_class += 1
        else:
            kept.append(track)
    return kept, FilterStats(region=region, volume=volume, wrong_class=wrong_class)


def weight_from_height(h: float, model: WeightModel) -> float:
    """Evaluate a weight model at a fruit height.

    Args:
        h: Fruit height in millimeters.
        model: Height-to-weight polynomial.

    Returns:
        Weight in grams.

    Raises:
        ContractViolationError: If h is not positive.

    Example:
        >>> round(weight_from_height(40.0, WeightModel.paper()), 3)
        27.408
    """
    if not h > 0:
        raise ContractViolationError(f"height must be positive, got {h}")
    return ((model.a3 * h + model.a2) * h + model.a1) * h + model.a0


def fit_weight_quadratic(points: Sequence[tuple[float, float]]) -> WeightModel:
    """Fit the unique quadratic through three (height mm, weight g) samples.

    Args:
        points: Exactly three samples with distinct heights.

    Returns:
        WeightModel with a3 = 0 and provenance ``fitted``.

    Raises:
        ContractViolationError: If not given exactly three points.
        SingularSystemError: If heights repeat.
    """
    if len(points) != 3:
        raise ContractViolationError(f"need exactly 3 calibration points, got {len(points)}")
    heights = np.array([p[0] for p in points], dtype=np.float64)
    weights = np.array([p[1] for p in points], dtype=np.float64)
    if len(set(heights.tolist())) != 3:
        raise SingularSystemError(f"calibration heights must be distinct: {heights.tolist()}")
    vandermonde = np.vander(heights, 3)
    try:
        a2, a1, a0 = np.linalg.solve(vandermonde, weights)
    except np.linalg.LinAlgError as e:
        raise SingularSystemError("calibration system is singular", e) from e
    return WeightModel(a3=0.0, a2=float(a2), a1=float(a1), a0=float(a0), provenance="fitted")


def resolve_weight_model(config: YieldConfig, name: WeightModelName | None = None) -> WeightModel:
    """Build the weight model named by ``name`` or, failing that, the config."""
    choice = name or config.weight_model
    if choice == "fitted":
        return fit_weight_quadratic(config.calibration_points)
    return WeightModel.paper()


def estimate_yield(
    tracks: Sequence[Track],
    config: YieldConfig,
    model: WeightModel | None = None,
) -> YieldReport:
    """Filter tracks and weigh the survivors.

    Args:
        tracks: Reliable tracks.
        config: Yield configuration.
        model: Weight model; resolved from the config when omitted.

    Returns:
        YieldReport with per-track weights in ascending track id.
    """
    weight_model = model or resolve_weight_model(config)
    kept, rejections = filter_tracks(tracks, config)

    entries = []
    for track in sorted(kept, key=lambda t: t.id):
        height_mm = track.cube.h * METERS_TO_MM
        entries.append(
            TrackWeight(
                track_id=track.id,
                height_mm=height_mm,
                weight_g=weight_from_height(height_mm, weight_model),
            )
        )

    total = math.fsum(e.weight_g for e in entries)
    report = YieldReport(
        count=len(entries),
        tracks=entries,
        total_weight_g=total,
        average_weight_g=total / len(entries) if entries else None,
        rejections=rejections,
        weight_model=weight_model,
    )
    logger.info(
        "estimate_yield: %d of %d tracks kept, total %.2f g (%s model), rejected %s",
        report.count,
        len(tracks),
        report.total_weight_g,
        weight_model.provenance,
        rejections.model_dump(),
    )
    return report
