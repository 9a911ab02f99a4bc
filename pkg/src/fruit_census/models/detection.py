"""3D detection data models.

A Detection3D is the world-frame cube obtained by fusing a 2D box with
the depth frame and camera pose. RejectionStats counts boxes that could
not be lifted to 3D, broken down by cause.
"""

from __future__ import annotations

from enum import IntEnum, StrEnum

from pydantic import BaseModel, Field, model_validator

from fruit_census.models.geometry import BBox2D, Cube, CubeFrame


class FruitClass(IntEnum):
    """Detector class catalogue.

    The detector was trained on five plant classes; only the two fruit
    classes are tracked.
    """

    STEM = 0
    UNRIPENED = 1
    RIPENED = 2
    LEAF_BRANCH = 3
    FLOWER = 4


class RejectionCause(StrEnum):
    """Reason a 2D box produced no 3D detection.

    Attributes:
        INVALID_MEDIAN: Median ROI depth was the invalid sentinel.
        OUT_OF_RANGE: Median ROI depth fell outside [min_depth, max_depth].
        EMPTY_ROI: Box does not cover any pixel after clamping.
    """

    INVALID_MEDIAN = "invalid_median"
    OUT_OF_RANGE = "out_of_range"
    EMPTY_ROI = "empty_roi"


class Detection3D(BaseModel):
    """A world-frame cube produced from one detector box.

    Attributes:
        cube: World-frame cube.
        class_id: Detector class.
        frame_id: Frame the detection came from.
        bbox: Source 2D box.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    cube: Cube
    class_id: int = Field(..., ge=0)
    frame_id: int = Field(..., ge=0)
    bbox: BBox2D

    @model_validator(mode="after")
    def validate_world_frame(self) -> Detection3D:
        """Ensure the cube is in the world frame."""
        if self.cube.frame != CubeFrame.WORLD:
            raise ValueError("Detection3D cube must be in the world frame")
        return self


class RejectionStats(BaseModel):
    """Per-cause counts of rejected boxes.

    Attributes:
        invalid_median: Boxes whose median depth was invalid (0).
        out_of_range: Boxes whose median depth was outside the depth window.
        empty_roi: Boxes with no pixels after clamping to the image.
    """

    model_config = {"frozen": False, "extra": "forbid"}

    invalid_median: int = Field(default=0, ge=0)
    out_of_range: int = Field(default=0, ge=0)
    empty_roi: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        """Total rejected boxes."""
        return self.invalid_median + self.out_of_range + self.empty_roi

    def record(self, cause: RejectionCause) -> None:
        """Increment the counter for one cause."""
        setattr(self, cause.value, getattr(self, cause.value) + 1)

    def merged(self, other: RejectionStats) -> RejectionStats:
        """Return the element-wise sum of two stats objects."""
        return RejectionStats(
            invalid_median=self.invalid_median + other.invalid_median,
            out_of_range=self.out_of_range + other.out_of_range,
            empty_roi=self.empty_roi + other.empty_roi,
        )


class FrameDetections(BaseModel):
    """3D detections and rejection stats for one synchronized frame."""

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int = Field(..., ge=0)
    detections: list[Detection3D] = Field(default_factory=list)
    stats: RejectionStats = Field(default_factory=RejectionStats)
