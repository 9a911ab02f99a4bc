"""Services module: pure computation and dataset I/O for each pipeline stage."""

from fruit_census.services.dataset import Dataset, load_dataset, write_dataset
from fruit_census.services.detect3d import detections_for_frame, make_detection, roi_median_depth
from fruit_census.services.estimation import (
    estimate_yield,
    filter_tracks,
    fit_weight_quadratic,
    resolve_weight_model,
    weight_from_height,
)
from fruit_census.services.evaluation import (
    compute_metrics,
    export_overlay,
    frame_sample_report,
    match_to_ground_truth,
)
from fruit_census.services.geometry import (
    back_project,
    center_distance,
    cube_volume,
    project_point,
    to_world,
)
from fruit_census.services.simulator import (
    export,
    generate_scene,
    generate_trajectory,
    render_frame,
    simulate,
)
from fruit_census.services.tracker import TrackStore, run_tracker, track_class

__all__ = [
    "Dataset",
    "TrackStore",
    "back_project",
    "center_distance",
    "compute_metrics",
    "cube_volume",
    "detections_for_frame",
    "estimate_yield",
    "export",
    "export_overlay",
    "filter_tracks",
    "fit_weight_quadratic",
    "frame_sample_report",
    "generate_scene",
    "generate_trajectory",
    "load_dataset",
    "make_detection",
    "match_to_ground_truth",
    "project_point",
    "render_frame",
    "resolve_weight_model",
    "roi_median_depth",
    "run_tracker",
    "simulate",
    "to_world",
    "track_class",
    "weight_from_height",
    "write_dataset",
]
