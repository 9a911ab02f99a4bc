"""Estimate yield node.

This node filters reliable tracks and converts them to a count and weight.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

from fruit_census.services.estimation import estimate_yield

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)


def estimate(state: PipelineState) -> dict[str, Any]:
    """Estimate yield from the reliable tracks.

    Args:
        state: Current graph state containing reliable_tracks and config.

    Returns:
        State update dict with yield_report.
    """
    reliable = state.get("reliable_tracks", [])
    report = estimate_yield(reliable, state["config"].yield_)

    if report.count == 0 and reliable:
        logger.warning("estimate: every reliable track was filtered out")
        return {
            "yield_report": report,
            "errors": [f"all {len(reliable)} reliable tracks rejected by yield filters"],
        }

    return {
        "yield_report": report,
    }
