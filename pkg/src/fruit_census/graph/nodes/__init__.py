"""Graph nodes for the fruit census pipeline.

This module exports all node functions used in the LangGraph StateGraph.
Each node represents a stage in the detect-track-estimate workflow.
"""

from fruit_census.graph.nodes.detect_frame import detect_frame
from fruit_census.graph.nodes.estimate import estimate
from fruit_census.graph.nodes.evaluate import evaluate
from fruit_census.graph.nodes.export import export_artifacts
from fruit_census.graph.nodes.load_dataset import load_dataset_dir
from fruit_census.graph.nodes.simulate import simulate_dataset
from fruit_census.graph.nodes.synchronize import synchronize_frames
from fruit_census.graph.nodes.track import track_detections

__all__ = [
    "detect_frame",
    "estimate",
    "evaluate",
    "export_artifacts",
    "load_dataset_dir",
    "simulate_dataset",
    "synchronize_frames",
    "track_detections",
]
