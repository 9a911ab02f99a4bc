"""Simulate dataset node.

This node generates a synthetic flight from the run configuration and
hands it to the rest of the pipeline as an in-memory dataset.
"""

from __future__ import annotations

import logging
import time
from typing import TYPE_CHECKING, Any

from fruit_census.services.simulator import simulate

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)


def simulate_dataset(state: PipelineState) -> dict[str, Any]:
    """Simulate the dataset described by the run configuration.

    Args:
        state: Current graph state containing the run configuration.

    Returns:
        State update dict with dataset, simulated flag, and start_time.

    Raises:
        SimulationError: If the scene constraints cannot be satisfied.
    """
    config = state["config"]
    start_time = time.time()

    logger.info(
        "simulate: seed=%d, %d fruit, %.1f m lane, %s mounting",
        config.seed,
        config.scene.fruit_count,
        config.scene.lane_length,
        config.trajectory.mounting,
    )
    dataset = simulate(config)

    return {
        "dataset": dataset,
        "simulated": True,
        "start_time": start_time,
    }
