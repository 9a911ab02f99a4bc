"""Load dataset node.

This node reads a recorded (or previously exported) dataset directory.
"""

from __future__ import annotations

import logging
import time
from typing import TYPE_CHECKING, Any

from fruit_census.exceptions import PipelineError
from fruit_census.services.dataset import load_dataset

if TYPE_CHECKING:
    from fruit_census.graph.state import PipelineState

logger = logging.getLogger(__name__)


def load_dataset_dir(state: PipelineState) -> dict[str, Any]:
    """Load the dataset named in the state.

    Args:
        state: Current graph state containing dataset_dir.

    Returns:
        State update dict with dataset, simulated flag, and start_time.

    Raises:
        PipelineError: If no dataset directory was given.
        DatasetError: If the dataset is missing or malformed.
    """
    dataset_dir = state.get("dataset_dir")
    if not dataset_dir:
        raise PipelineError("load_dataset: no dataset directory in state")
    start_time = time.time()

    logger.info("load_dataset: Loading %s", dataset_dir)
    dataset = load_dataset(dataset_dir)

    return {
        "dataset": dataset,
        "simulated": False,
        "start_time": start_time,
    }
