"""Track data models for stationary-fruit tracking.

This module defines the tracker configuration, the Track record that
summarizes every detection associated with one presumed fruit, and the
per-frame association report.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, computed_field, model_validator

from fruit_census.models.geometry import Cube, CubeFrame


class TrackerConfig(BaseModel):
    """Association and update parameters.

    Attributes:
        dist_max: Association gate on center distance (meters).
        w_p: Position update weight.
        w_v: Extent update weight.
        min_associations: Associations required for a track to be reliable.

    Example:
        >>> TrackerConfig().dist_max
        0.04
    """

    model_config = {"frozen": True, "extra": "forbid"}

    dist_max: float = Field(default=0.04, gt=0, description="Association gate (m)")
    w_p: float = Field(default=0.7, gt=0, le=1, description="Position update weight")
    w_v: float = Field(default=0.7, gt=0, le=1, description="Extent update weight")
    min_associations: int = Field(default=3, ge=1, description="Reliability threshold")


class Track(BaseModel):
    """Accumulated state of one presumed fruit.

    Attributes:
        id: Stable identifier, never reused within a store.
        cube: Current world-frame cube estimate.
        class_histogram: Association count per detector class.
        last_class_id: Class of the most recently associated detection.
        n_assoc: Total associated detections (creation counts as one).
        created_frame: Frame the track was created in.
        last_matched_frame: Most recent frame with an associated detection.
    """

    model_config = {"frozen": False, "extra": "ignore"}

    id: int = Field(..., ge=0)
    cube: Cube
    class_histogram: dict[int, int] = Field(default_factory=dict)
    last_class_id: int = Field(..., ge=0)
    n_assoc: int = Field(default=1, ge=1)
    created_frame: int = Field(..., ge=0)
    last_matched_frame: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_world_frame(self) -> Track:
        """Ensure the track cube is in the world frame."""
        if self.cube.frame != CubeFrame.WORLD:
            raise ValueError("Track cube must be in the world frame")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def class_id(self) -> int:
        """Majority class; ties go to the most recently associated class.

        When the last class is not among the tied classes, the smallest
        tied class id wins.

        Returns:
            Aggregated class id.
        """
        if not self.class_histogram:
            return self.last_class_id
        best = max(self.class_histogram.values())
        tied = sorted(c for c, n in self.class_histogram.items() if n == best)
        if self.last_class_id in tied:
            return self.last_class_id
        return tied[0]


class FrameReport(BaseModel):
    """Outcome of processing one frame of detections.

    Attributes:
        frame_id: Frame processed (None when the frame had no detections).
        matched: (detection index, track id) pairs, ascending detection index.
        new_track_ids: Tracks created from this frame's detections.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int | None = None
    matched: list[tuple[int, int]] = Field(default_factory=list)
    new_track_ids: list[int] = Field(default_factory=list)

    @property
    def detection_count(self) -> int:
        """Detections consumed by this frame."""
        return len(self.matched) + len(self.new_track_ids)
