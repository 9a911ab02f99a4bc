"""LangGraph StateGraph assembly for the fruit census pipeline.

This module creates and compiles the pipeline graph, connecting all nodes
with proper edges and enabling parallel per-frame 3D detection.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

from langgraph.graph import END, START, StateGraph

from fruit_census.graph.nodes import (
    detect_frame,
    estimate,
    evaluate,
    export_artifacts,
    load_dataset_dir,
    simulate_dataset,
    synchronize_frames,
    track_detections,
)
from fruit_census.graph.state import PipelineState

if TYPE_CHECKING:
    from langgraph.graph.state import CompiledStateGraph

logger = logging.getLogger(__name__)


def route_source(state: PipelineState) -> str:
    """Conditional entry: load a dataset directory if given, else simulate."""
    return "load_dataset" if state.get("dataset_dir") else "simulate"


def continue_to_detect_frame(state: PipelineState) -> list[Any]:
    """Conditional edge that returns Send objects for parallel 3D detection.

    Creates one Send per synchronized frame. With no usable frames the
    graph goes straight to tracking, which then builds an empty store.

    Args:
        state: Current graph state with synchronized frames.

    Returns:
        List of Send objects, or ["track"] when there are no frames.
    """
    from langgraph.types import Send

    frames = state["sync"].frames
    if not frames:
        return ["track"]
    dataset = state["dataset"]
    return [Send("detect_frame", {"frame": frame, "dataset": dataset}) for frame in frames]


def route_after_estimate(state: PipelineState) -> str:
    """Evaluate when the dataset carries ground truth, otherwise export."""
    return "evaluate" if state["dataset"].ground_truth is not None else "export"


def create_pipeline_graph(
    with_estimate: bool = True,
    with_evaluation: bool = True,
) -> CompiledStateGraph:  # type: ignore[type-arg]
    """Create and compile the fruit census pipeline graph.

    Graph structure:
        START → simulate | load_dataset → synchronize
              → detect_frame (parallel via Send) → track
              → estimate → evaluate (if ground truth) → export → END

    Args:
        with_estimate: Include the yield estimate stage.
        with_evaluation: Include ground-truth evaluation (requires estimate).

    Returns:
        Compiled StateGraph ready for invocation with invoke().

    Example:
        >>> graph = create_pipeline_graph()
        >>> result = graph.invoke({"config": RunConfig(), "out_dir": "runs/demo"})
        >>> result["metrics"].counting_accuracy
    """
    logger.debug(
        "create_pipeline_graph: Building StateGraph (estimate=%s, evaluation=%s)",
        with_estimate,
        with_evaluation,
    )

    graph = StateGraph(PipelineState)

    graph.add_node("simulate", simulate_dataset)
    graph.add_node("load_dataset", load_dataset_dir)
    graph.add_node("synchronize", synchronize_frames)
    # detect_frame receives Send-transformed state, not full PipelineState
    graph.add_node("detect_frame", detect_frame)  # type: ignore[type-var]
    graph.add_node("track", track_detections)
    graph.add_node("export", export_artifacts)

    graph.add_conditional_edges(START, route_source, ["simulate", "load_dataset"])
    graph.add_edge("simulate", "synchronize")
    graph.add_edge("load_dataset", "synchronize")

    # synchronize -> detect_frame via conditional edge (Send pattern for parallel execution)
    graph.add_conditional_edges(
        "synchronize", continue_to_detect_frame, ["detect_frame", "track"]
    )

    # detect_frame -> track (all parallel fusions complete before tracking)
    graph.add_edge("detect_frame", "track")

    if with_estimate:
        graph.add_node("estimate", estimate)
        graph.add_edge("track", "estimate")
        if with_evaluation:
            graph.add_node("evaluate", evaluate)
            graph.add_conditional_edges("estimate", route_after_estimate, ["evaluate", "export"])
            graph.add_edge("evaluate", "export")
        else:
            graph.add_edge("estimate", "export")
    else:
        graph.add_edge("track", "export")

    graph.add_edge("export", END)

    logger.debug("create_pipeline_graph: Compiling graph")
    compiled = graph.compile()

    logger.info("create_pipeline_graph: Graph compiled successfully")
    return compiled
