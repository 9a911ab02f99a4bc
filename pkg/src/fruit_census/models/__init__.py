"""Pydantic models for data validation and serialization."""

from fruit_census.models.dataset import (
    DEPTH_INVALID,
    DatasetManifest,
    DepthFrame,
    DetectionRecord,
    FrameSync,
    GroundTruth,
    GroundTruthFruit,
    PoseRecord,
    SyncedFrame,
)
from fruit_census.models.detection import (
    Detection3D,
    FrameDetections,
    FruitClass,
    RejectionCause,
    RejectionStats,
)
from fruit_census.models.estimation import (
    FilterStats,
    RegionFilter,
    TrackWeight,
    WeightModel,
    YieldConfig,
    YieldReport,
)
from fruit_census.models.evaluation import (
    EvaluationConfig,
    FrameSampleReport,
    FrameSampleRow,
    MatchPair,
    MatchResult,
    Metrics,
    OverlayRecord,
)
from fruit_census.models.geometry import BBox2D, CameraIntrinsics, Cube, CubeFrame, Pose6D
from fruit_census.models.run_config import RunConfig, load_run_config
from fruit_census.models.simulation import NoiseSpec, SceneSpec, ScriptedOcclusion, TrajectorySpec
from fruit_census.models.track import FrameReport, Track, TrackerConfig

__all__ = [
    "DEPTH_INVALID",
    "BBox2D",
    "CameraIntrinsics",
    "Cube",
    "CubeFrame",
    "DatasetManifest",
    "DepthFrame",
    "Detection3D",
    "DetectionRecord",
    "EvaluationConfig",
    "FilterStats",
    "FrameDetections",
    "FrameReport",
    "FrameSampleReport",
    "FrameSampleRow",
    "FrameSync",
    "FruitClass",
    "GroundTruth",
    "GroundTruthFruit",
    "MatchPair",
    "MatchResult",
    "Metrics",
    "NoiseSpec",
    "OverlayRecord",
    "Pose6D",
    "PoseRecord",
    "RegionFilter",
    "RejectionCause",
    "RejectionStats",
    "RunConfig",
    "SceneSpec",
    "ScriptedOcclusion",
    "SyncedFrame",
    "Track",
    "TrackWeight",
    "TrackerConfig",
    "TrajectorySpec",
    "WeightModel",
    "YieldConfig",
    "YieldReport",
    "load_run_config",
]
