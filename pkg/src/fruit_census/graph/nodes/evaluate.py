"""Evaluate node.

This node compares the estimate and the reliable tracks with the
dataset's ground truth.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

from fruit_census.services.evaluation import (
    compute_metrics,
    frame_sample_report,
    match_to_ground_truth,
)

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)


def evaluate(state: PipelineState) -> dict[str, Any]:
    """Match tracks to ground truth and compute metrics.

    Args:
        state: Current graph state containing dataset, reliable_tracks,
            yield_report, and config.

    Returns:
        State update dict with match, metrics, and frame_samples.
    """
    dataset = state["dataset"]
    config = state["config"]
    ground_truth = dataset.ground_truth
    if ground_truth is None:
        logger.warning("evaluate: dataset has no ground truth, skipping")
        return {"errors": ["evaluation skipped: no ground truth"]}

    reliable = state.get("reliable_tracks", [])
    match = match_to_ground_truth(
        reliable,
        ground_truth.fruits,
        radius=config.evaluation.match_radius,
        duplicate_radius=config.evaluation.duplicate_radius,
    )
    metrics = compute_metrics(
        state["yield_report"],
        ground_truth,
        match,
        target_class=config.yield_.target_class,
        flight_time=dataset.manifest.frame_count / dataset.manifest.frame_rate,
    )
    samples = frame_sample_report(dataset, reliable, config.evaluation)

    logger.info(
        "evaluate: precision %s, recall %s, %d duplicate tracks",
        metrics.precision,
        metrics.recall,
        metrics.duplicate_tracks,
    )
    return {
        "match": match,
        "metrics": metrics,
        "frame_samples": samples,
    }
