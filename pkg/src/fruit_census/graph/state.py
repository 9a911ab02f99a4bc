"""LangGraph state definition for the fruit census pipeline."""

from __future__ import annotations

from operator import add
from typing import Annotated, TypedDict

# These imports are needed at runtime for TypedDict, not just type-checking
from fruit_census.models.dataset import FrameSync  # noqa: TC001
from fruit_census.models.detection import FrameDetections, RejectionStats  # noqa: TC001
from fruit_census.models.estimation import YieldReport  # noqa: TC001
from fruit_census.models.evaluation import FrameSampleReport, MatchResult, Metrics  # noqa: TC001
from fruit_census.models.run_config import RunConfig  # noqa: TC001
from fruit_census.models.track import Track  # noqa: TC001
from fruit_census.services.dataset import Dataset  # noqa: TC001


class PipelineState(TypedDict, total=False):
    """State for the detect-track-estimate-evaluate pipeline.

    State flows through these stages:
    1. RunConfig input (plus an optional dataset directory)
    2. Dataset simulated or loaded
    3. Frames synchronized by frame id
    4. 3D detections fused per frame in parallel (Send pattern)
    5. Tracks built sequentially in frame order
    6. Yield estimated from reliable tracks
    7. Metrics and frame samples computed when ground truth exists
    8. Artifacts written to the output directory

    Attributes:
        config: Run configuration.
        dataset_dir: Dataset to load; the dataset is simulated when absent.
        out_dir: Artifact directory; nothing is written when absent.
        dataset: Loaded or simulated dataset.
        simulated: Whether the dataset came from the simulator.
        sync: Synchronized frames and join counters.
        frame_detections: Per-frame 3D detections (parallel append via Send).
        tracks: Every track, id order.
        reliable_tracks: Tracks meeting the association threshold.
        rejection_stats: Depth rejections summed over all frames.
        yield_report: Yield estimate.
        match: Reliable tracks matched to ground truth.
        metrics: Evaluation metrics.
        frame_samples: Sampled-frame reprojection report.
        artifacts: Paths written by the export node.
        errors: Accumulated non-fatal problems from all nodes.
        start_time: Pipeline start timestamp (Unix time).
    """

    # Input
    config: RunConfig
    dataset_dir: str | None
    out_dir: str | None

    # Pipeline stages
    dataset: Dataset
    simulated: bool
    sync: FrameSync
    frame_detections: Annotated[list[FrameDetections], add]  # Parallel append via Send
    tracks: list[Track]
    reliable_tracks: list[Track]
    rejection_stats: RejectionStats
    yield_report: YieldReport
    match: MatchResult
    metrics: Metrics
    frame_samples: FrameSampleReport

    # Output
    artifacts: Annotated[list[str], add]

    # Metadata
    errors: Annotated[list[str], add]
    start_time: float
