"""Camera, pose, and cube data models.

This module defines the immutable geometry value types shared by every
stage of the pipeline: pinhole intrinsics, 6D camera poses, 2D detector
boxes, and axis-aligned cubes in camera or world frame.
"""

from __future__ import annotations

import math
from enum import StrEnum
from functools import cached_property

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from scipy.spatial.transform import Rotation

QUATERNION_LOAD_TOLERANCE = 1e-6
"""Maximum deviation of a stored quaternion's norm from 1 before it is rejected."""


class CubeFrame(StrEnum):
    """Coordinate frame a cube is expressed in."""

    CAMERA = "camera"
    WORLD = "world"


class CameraIntrinsics(BaseModel):
    """Pinhole camera model with depth conversion parameters.

    Defaults describe a RealSense D405-class sensor at 848x480 with the
    depth window used for fruit tracking (0.07 m to 1.0 m).

    Attributes:
        fx: Focal length along image x (pixels).
        fy: Focal length along image y (pixels).
        cx: Principal point x (pixels).
        cy: Principal point y (pixels).
        width: Image width (pixels).
        height: Image height (pixels).
        depth_scale: Meters per raw depth unit.
        min_depth: Nearest accepted depth (meters).
        max_depth: Farthest accepted depth (meters).

    Example:
        >>> intr = CameraIntrinsics(fx=400, fy=400, cx=424, cy=240)
        >>> intr.depth_to_units(0.5)
        500
    """

    model_config = {"frozen": True, "extra": "forbid"}

    fx: float = Field(default=434.5, gt=0, description="Focal length x (px)")
    fy: float = Field(default=434.5, gt=0, description="Focal length y (px)")
    cx: float = Field(default=424.0, ge=0, description="Principal point x (px)")
    cy: float = Field(default=240.0, ge=0, description="Principal point y (px)")
    width: int = Field(default=848, gt=0, description="Image width (px)")
    height: int = Field(default=480, gt=0, description="Image height (px)")
    depth_scale: float = Field(default=0.001, gt=0, description="Meters per depth unit")
    min_depth: float = Field(default=0.07, gt=0, description="Nearest valid depth (m)")
    max_depth: float = Field(default=1.0, gt=0, description="Farthest valid depth (m)")

    @model_validator(mode="after")
    def validate_ranges(self) -> CameraIntrinsics:
        """Check the principal point lies in the image and the depth window is ordered.

        Returns:
            The validated intrinsics.

        Raises:
            ValueError: If cx/cy fall outside the image or min_depth >= max_depth.
        """
        if not self.cx < self.width:
            raise ValueError(f"cx={self.cx} must be < width={self.width}")
        if not self.cy < self.height:
            raise ValueError(f"cy={self.cy} must be < height={self.height}")
        if not self.min_depth < self.max_depth:
            raise ValueError(
                f"min_depth={self.min_depth} must be < max_depth={self.max_depth}"
            )
        return self

    def depth_in_range(self, z: float) -> bool:
        """Check a metric depth against the accepted window [min_depth, max_depth]."""
        return self.min_depth <= z <= self.max_depth

    def depth_to_units(self, z: float) -> int:
        """Quantize a metric depth to raw sensor units."""
        return round(z / self.depth_scale)

    @property
    def max_depth_units(self) -> int:
        """Largest raw depth value a valid frame may contain."""
        return math.floor(self.max_depth / self.depth_scale + 1e-9)


class Pose6D(BaseModel):
    """Rigid camera pose: camera-to-world rotation and camera position in world.

    The rotation is a unit quaternion stored scalar-last (qx, qy, qz, qw).
    Quaternions within 1e-6 of unit norm are renormalized on construction;
    anything further off is rejected.

    Attributes:
        translation: Camera center in world coordinates (meters).
        rotation: Camera-to-world unit quaternion (qx, qy, qz, qw).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rotation: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 1.0)

    @field_validator("rotation")
    @classmethod
    def normalize_quaternion(
        cls, v: tuple[float, float, float, float]
    ) -> tuple[float, float, float, float]:
        """Renormalize near-unit quaternions and reject the rest.

        Args:
            v: Quaternion as (qx, qy, qz, qw).

        Returns:
            Quaternion with unit norm.

        Raises:
            ValueError: If the norm deviates from 1 by more than the load tolerance.
        """
        norm = math.sqrt(sum(c * c for c in v))
        if abs(norm - 1.0) > QUATERNION_LOAD_TOLERANCE:
            raise ValueError(f"quaternion norm {norm:.9f} is not within 1e-6 of 1")
        if norm == 1.0:
            return v
        qx, qy, qz, qw = (c / norm for c in v)
        return (qx, qy, qz, qw)

    @classmethod
    def identity(cls) -> Pose6D:
        """Pose with the camera at the world origin looking down world +z."""
        return cls()

    @classmethod
    def from_rotation(cls, rotation: Rotation, translation: tuple[float, float, float]) -> Pose6D:
        """Build a pose from a scipy Rotation (camera-to-world) and a translation."""
        qx, qy, qz, qw = (float(c) for c in rotation.as_quat())
        return cls(translation=translation, rotation=(qx, qy, qz, qw))

    @cached_property
    def rotation_matrix(self) -> np.ndarray:
        """3x3 camera-to-world rotation matrix."""
        matrix: np.ndarray = Rotation.from_quat(self.rotation).as_matrix()
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def position(self) -> np.ndarray:
        """Camera center in world coordinates as an array."""
        position = np.asarray(self.translation, dtype=np.float64)
        position.setflags(write=False)
        return position

    def camera_to_world(self, p: np.ndarray) -> np.ndarray:
        """Transform a camera-frame point into the world frame."""
        return self.rotation_matrix @ np.asarray(p, dtype=np.float64) + self.position

    def world_to_camera(self, p: np.ndarray) -> np.ndarray:
        """Transform a world-frame point into the camera frame."""
        return self.rotation_matrix.T @ (np.asarray(p, dtype=np.float64) - self.position)


class BBox2D(BaseModel):
    """Axis-aligned 2D detector box in pixel coordinates.

    Attributes:
        u: Box center x (pixels).
        v: Box center y (pixels).
        du: Box width (pixels).
        dv: Box height (pixels).
        class_id: Detector class.
        confidence: Detector confidence in [0, 1].
        frame_id: Frame the box was detected in.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    u: float
    v: float
    du: float = Field(..., gt=0)
    dv: float = Field(..., gt=0)
    class_id: int = Field(..., ge=0)
    confidence: float = Field(default=1.0, ge=0.0, le=1.0)
    frame_id: int = Field(..., ge=0)

    @property
    def u_min(self) -> float:
        """Left edge (pixels)."""
        return self.u - self.du / 2

    @property
    def u_max(self) -> float:
        """Right edge (pixels)."""
        return self.u + self.du / 2

    @property
    def v_min(self) -> float:
        """Top edge (pixels)."""
        return self.v - self.dv / 2

    @property
    def v_max(self) -> float:
        """Bottom edge (pixels)."""
        return self.v + self.dv / 2

    def intersects_image(self, width: int, height: int) -> bool:
        """Check whether the box overlaps the image rectangle [0, width) x [0, height)."""
        return self.u_max > 0 and self.u_min < width and self.v_max > 0 and self.v_min < height


class Cube(BaseModel):
    """Axis-aligned cube approximating a fruit: center plus extents.

    Orientation is not tracked. Extents are those measured in the camera
    and are carried unchanged when the center moves to the world frame.

    Attributes:
        x: Center x (meters).
        y: Center y (meters).
        z: Center z (meters).
        w: Extent across the image (meters).
        h: Extent down the image (meters); the fruit height used for weight mapping.
        l: Extent along the optical axis (meters).
        frame: Frame the cube is expressed in.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    x: float
    y: float
    z: float
    w: float = Field(..., gt=0)
    h: float = Field(..., gt=0)
    l: float = Field(..., gt=0)  # noqa: E741
    frame: CubeFrame = CubeFrame.WORLD

    @property
    def center(self) -> np.ndarray:
        """Center as a float64 array."""
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @property
    def extents(self) -> tuple[float, float, float]:
        """Extents (w, h, l)."""
        return (self.w, self.h, self.l)
