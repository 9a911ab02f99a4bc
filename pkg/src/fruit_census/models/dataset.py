"""On-disk dataset record models.

Each model here corresponds to one record type in the dataset directory:
depth frames, pose records, detection records, ground-truth fruit, and
the manifest tying them together.
"""

from __future__ import annotations

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fruit_census.models.geometry import BBox2D, Pose6D  # noqa: TC001

DEPTH_INVALID = 0
"""Raw depth value marking a pixel without a measurement."""


class DepthFrame(BaseModel):
    """Row-major 16-bit range image.

    The pixel array is stored read-only with shape (height, width) and
    dtype uint16. A value of 0 marks an invalid pixel.

    Attributes:
        frame_id: Frame this depth image belongs to.
        width: Image width (pixels).
        height: Image height (pixels).
        values: Raw depth units, shape (height, width).
    """

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    frame_id: int = Field(..., ge=0)
    width: int = Field(..., gt=0)
    height: int = Field(..., gt=0)
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def coerce_values(cls, v: Any) -> np.ndarray:
        """Convert input to a read-only uint16 array.

        Args:
            v: Array-like of raw depth units.

        Returns:
            Read-only uint16 array.

        Raises:
            ValueError: If any value is outside the 16-bit range.
        """
        arr = np.asarray(v)
        if arr.dtype != np.uint16:
            if arr.size and (arr.min() < 0 or arr.max() > np.iinfo(np.uint16).max):
                raise ValueError("depth values must fit in 16 bits")
            arr = arr.astype(np.uint16)
        else:
            arr = arr.copy()
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_shape(self) -> DepthFrame:
        """Ensure the pixel array matches the declared size."""
        if self.values.size != self.width * self.height:
            raise ValueError(
                f"depth frame has {self.values.size} values, "
                f"expected {self.width}x{self.height}={self.width * self.height}"
            )
        if self.values.shape != (self.height, self.width):
            object.__setattr__(self, "values", self.values.reshape(self.height, self.width))
        return self

    def to_meters(self, depth_scale: float) -> np.ndarray:
        """Convert raw units to meters; invalid pixels stay 0."""
        return self.values.astype(np.float64) * depth_scale

    def __eq__(self, other: object) -> bool:
        """Compare frame id, size, and pixel values bit-exactly."""
        if not isinstance(other, DepthFrame):
            return NotImplemented
        return (
            self.frame_id == other.frame_id
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]


class PoseRecord(BaseModel):
    """Camera pose for one frame.

    Attributes:
        frame_id: Frame identifier; strictly increasing within a file.
        pose: Camera-to-world pose.
        timestamp: Capture time in seconds (informational).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int = Field(..., ge=0)
    pose: Pose6D
    timestamp: float = 0.0


class DetectionRecord(BaseModel):
    """One 2D detector output tied to a frame.

    Attributes:
        frame_id: Frame the box belongs to.
        bbox: The detector box.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int = Field(..., ge=0)
    bbox: BBox2D

    @model_validator(mode="after")
    def validate_frame_id(self) -> DetectionRecord:
        """Ensure the record and its box agree on the frame."""
        if self.bbox.frame_id != self.frame_id:
            raise ValueError(
                f"bbox frame_id {self.bbox.frame_id} does not match record frame_id "
                f"{self.frame_id}"
            )
        return self


class GroundTruthFruit(BaseModel):
    """A simulated (or surveyed) fruit.

    Attributes:
        id: Fruit identifier.
        center: World-frame center (meters).
        diameter: Fruit diameter (meters).
        class_id: True class.
        weight: Fruit weight in grams, if known.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    id: int = Field(..., ge=0)
    center: tuple[float, float, float]
    diameter: float = Field(..., gt=0)
    class_id: int = Field(..., ge=0)
    weight: float | None = Field(default=None, ge=0)


class GroundTruth(BaseModel):
    """Container serialized as ground_truth.json."""

    model_config = {"frozen": True, "extra": "forbid"}

    fruits: list[GroundTruthFruit] = Field(default_factory=list)


class DatasetManifest(BaseModel):
    """Index of a dataset directory.

    Paths are relative to the dataset root.

    Attributes:
        version: Layout version.
        intrinsics: Camera intrinsics file.
        poses: Line-delimited pose records.
        detections: Line-delimited detection records.
        depth_dir: Directory of %06d.pgm depth frames.
        ground_truth: Optional ground-truth file.
        frame_count: Number of frames recorded.
        frame_rate: Capture rate (Hz).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    version: int = 1
    intrinsics: str = "intrinsics.json"
    poses: str = "poses.jsonl"
    detections: str = "detections.jsonl"
    depth_dir: str = "depth"
    ground_truth: str | None = None
    frame_count: int = Field(..., ge=0)
    frame_rate: float = Field(..., gt=0)


class SyncedFrame(BaseModel):
    """Pose and detections joined on one frame id.

    The depth frame is not carried here; it is read on demand from the
    dataset so synchronized frames stay cheap to pass between stages.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int = Field(..., ge=0)
    pose: Pose6D
    detections: list[BBox2D] = Field(default_factory=list)
    timestamp: float = 0.0


class FrameSync(BaseModel):
    """Result of joining poses, detections, and depth frames by frame id.

    Attributes:
        frames: Usable frames, strictly increasing frame_id.
        skipped_frames: Depth frames without a pose record.
        missing_depth: Pose records without a depth frame.
        dropped_detections: Detections whose frame was not usable.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    frames: list[SyncedFrame] = Field(default_factory=list)
    skipped_frames: int = Field(default=0, ge=0)
    missing_depth: int = Field(default=0, ge=0)
    dropped_detections: int = Field(default=0, ge=0)

    @property
    def detection_count(self) -> int:
        """Detections attached to usable frames."""
        return sum(len(f.detections) for f in self.frames)
