"""Synthetic greenhouse specifications.

SceneSpec places fruit along a lane, TrajectorySpec describes the camera
flight, and NoiseSpec controls detector and depth-sensor imperfections.
Defaults follow the surveyed harvesting lane: 13.2 m long, fruit between
28 mm and 45 mm, a camera 0.42 m from the row flying at 2 m/s.

None of the noise defaults are measured detector statistics; they are
tunable assumptions.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

SEED_MAX = 2**64 - 1


class SceneSpec(BaseModel):
    """Ground-truth fruit placement parameters.

    Fruit hang in a band around the row plane ``y = row_offset``. Centers
    are drawn in clusters and kept at least ``min_separation`` apart in the
    row (x-z) plane.

    Attributes:
        lane_length: Lane length along world x (meters).
        fruit_count: Number of fruit to place.
        diameter_min: Smallest fruit diameter (meters).
        diameter_max: Largest fruit diameter (meters).
        row_offset: World y of the row plane (meters).
        band_depth: Thickness of the placement band around the row plane (meters).
        height_min: Lowest fruit center height (meters).
        height_max: Highest fruit center height (meters).
        fruits_per_cluster: Mean fruit per cluster (truss).
        cluster_spread: Standard deviation of fruit around a cluster center (meters).
        min_separation: Minimum center distance in the row plane (meters).
        ripened_fraction: Probability a fruit is ripened.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    lane_length: float = Field(default=13.2, gt=0)
    fruit_count: int = Field(default=50, ge=0)
    diameter_min: float = Field(default=0.028, gt=0)
    diameter_max: float = Field(default=0.045, gt=0)
    row_offset: float = 0.42
    band_depth: float = Field(default=0.04, ge=0)
    height_min: float = 1.0
    height_max: float = 1.4
    fruits_per_cluster: int = Field(default=5, ge=1)
    cluster_spread: float = Field(default=0.06, ge=0)
    min_separation: float = Field(default=0.05, ge=0)
    ripened_fraction: float = Field(default=1.0, ge=0, le=1)

    @model_validator(mode="after")
    def validate_ranges(self) -> SceneSpec:
        """Ensure diameter and height ranges are ordered."""
        if self.diameter_min > self.diameter_max:
            raise ValueError("diameter_min must be <= diameter_max")
        if self.height_min > self.height_max:
            raise ValueError("height_min must be <= height_max")
        return self


class TrajectorySpec(BaseModel):
    """Straight constant-speed camera flight along world +x.

    Attributes:
        speed: Flight speed (m/s).
        frame_rate: Capture rate (Hz).
        mounting: ``forward`` looks straight at the row, ``tilted`` applies the
            yaw/pitch offsets.
        yaw_deg: Yaw offset about the camera's vertical axis (tilted only).
        pitch_deg: Pitch offset about the camera's horizontal axis (tilted only).
        row_distance: Camera-to-row distance (meters).
        height: Camera height (meters).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    speed: float = Field(default=2.0, gt=0)
    frame_rate: float = Field(default=30.0, gt=0)
    mounting: Literal["forward", "tilted"] = "forward"
    yaw_deg: float = Field(default=30.0, ge=-90, le=90)
    pitch_deg: float = Field(default=0.0, ge=-90, le=90)
    row_distance: float = Field(default=0.42, gt=0)
    height: float = 1.2


class ScriptedOcclusion(BaseModel):
    """Deterministic occluder in front of one fruit over consecutive frames.

    Attributes:
        fruit_id: Occluded fruit.
        first_frame: First frame the occluder appears in.
        frame_count: Number of consecutive frames.
        coverage: Fraction f of the fruit's box covered.
        depth_offset: Distance δ the occluder sits in front of the fruit (meters).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    fruit_id: int = Field(..., ge=0)
    first_frame: int = Field(..., ge=0)
    frame_count: int = Field(default=1, ge=1)
    coverage: float = Field(default=0.6, gt=0, le=1)
    depth_offset: float = Field(default=0.15, gt=0)

    def active(self, frame_id: int) -> bool:
        """Check whether the occluder is present in a frame."""
        return self.first_frame <= frame_id < self.first_frame + self.frame_count


class NoiseSpec(BaseModel):
    """Detector and depth-sensor imperfections.

    Attributes:
        pixel_sigma: Box center jitter standard deviation (pixels).
        depth_sigma: Per-pixel depth noise standard deviation (meters).
        miss_rate: Probability a visible fruit produces no box.
        false_positive_rate: Expected false-positive boxes per frame.
        fp_with_depth: Give false positives a plausible depth surface.
        occluder_probability: Chance per fruit-frame of a random occluder.
        occluder_offset: Random occluder distance in front of the fruit (meters).
        occluder_coverage: Fraction of the box a random occluder covers.
        min_box_px: Smallest box side that is labelled (pixels).
        min_visible_fraction: Share of a box that must not be hidden behind nearer
            fruit for the detector to fire.
        scripted_occlusions: Deterministic occluders.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    pixel_sigma: float = Field(default=1.0, ge=0)
    depth_sigma: float = Field(default=0.005, ge=0)
    miss_rate: float = Field(default=0.1, ge=0, le=1)
    false_positive_rate: float = Field(default=0.05, ge=0, le=1)
    fp_with_depth: bool = False
    occluder_probability: float = Field(default=0.0, ge=0, le=1)
    occluder_offset: float = Field(default=0.15, gt=0)
    occluder_coverage: float = Field(default=0.6, gt=0, le=1)
    min_box_px: float = Field(default=10.0, ge=0)
    min_visible_fraction: float = Field(default=0.5, ge=0, le=1)
    scripted_occlusions: list[ScriptedOcclusion] = Field(default_factory=list)

    @classmethod
    def noiseless(cls) -> NoiseSpec:
        """Noise spec with every imperfection disabled."""
        return cls(
            pixel_sigma=0.0,
            depth_sigma=0.0,
            miss_rate=0.0,
            false_positive_rate=0.0,
            occluder_probability=0.0,
        )
