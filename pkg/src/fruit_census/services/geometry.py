"""Camera model, rigid transforms, and cube algebra.

Every coordinate-frame computation in the pipeline goes through this
module. Camera frame convention: x right, y down, z along the optical
axis. Poses map camera coordinates into the world frame.

Pure computation - all functions are side-effect free.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from fruit_census.exceptions import ContractViolationError, DepthRangeError
from fruit_census.models.geometry import BBox2D, CameraIntrinsics, Cube, CubeFrame, Pose6D

if TYPE_CHECKING:
    from collections.abc import Sequence


def back_project(bbox: BBox2D, z: float, intr: CameraIntrinsics) -> Cube:
    """Lift a 2D box at a known depth to a camera-frame cube.

    X = (u - cx) z / fx, Y = (v - cy) z / fy, W = du z / fx, H = dv z / fy,
    and the extent along the optical axis L is the mean of W and H.

    Args:
        bbox: Detector box.
        z: Depth of the box (meters).
        intr: Camera intrinsics.

    Returns:
        Cube in the camera frame.

    Raises:
        DepthRangeError: If z is outside [min_depth, max_depth].

    Example:
        >>> intr = CameraIntrinsics(fx=400, fy=400, cx=424, cy=240)
        >>> box = BBox2D(u=624, v=240, du=24, dv=32, class_id=2, frame_id=0)
        >>> back_project(box, 0.5, intr).x
        0.25
    """
    if not intr.depth_in_range(z):
        raise DepthRangeError(
            f"depth {z:.4f} m outside [{intr.min_depth}, {intr.max_depth}] m"
        )
    W = bbox.du * z / intr.fx
    H = bbox.dv * z / intr.fy
    return Cube(
        x=(bbox.u - intr.cx) * z / intr.fx,
        y=(bbox.v - intr.cy) * z / intr.fy,
        z=z,
        w=W,
        h=H,
        l=(W + H) / 2,
        frame=CubeFrame.CAMERA,
    )


def to_world(cube: Cube, pose: Pose6D) -> Cube:
    """Move a camera-frame cube into the world frame.

    The center is rigidly transformed. Extents are carried over unchanged
    and the result is treated as axis-aligned in the world frame, since
    orientation is not tracked.

    Args:
        cube: Cube in the camera frame.
        pose: Camera-to-world pose.

    Returns:
        Cube in the world frame.

    Raises:
        ContractViolationError: If the cube is not in the camera frame.
    """
    if cube.frame != CubeFrame.CAMERA:
        raise ContractViolationError("to_world expects a camera-frame cube")
    x, y, z = pose.camera_to_world(cube.center)
    return Cube(
        x=float(x),
        y=float(y),
        z=float(z),
        w=cube.w,
        h=cube.h,
        l=cube.l,
        frame=CubeFrame.WORLD,
    )


def project_point(
    p: Sequence[float] | np.ndarray,
    pose: Pose6D,
    intr: CameraIntrinsics,
) -> tuple[float, float] | None:
    """Project a world point to pixel coordinates.

    Args:
        p: World-frame point.
        pose: Camera-to-world pose.
        intr: Camera intrinsics.

    Returns:
        (u, v) in pixels, or None if the point is not in front of the camera.
    """
    xc, yc, zc = pose.world_to_camera(np.asarray(p, dtype=np.float64))
    if zc <= 0:
        return None
    return (float(intr.fx * xc / zc + intr.cx), float(intr.fy * yc / zc + intr.cy))


def center_distance(a: Cube, b: Cube) -> float:
    """Euclidean distance between cube centers.

    Raises:
        ContractViolationError: If the cubes are in different frames.
    """
    if a.frame != b.frame:
        raise ContractViolationError(
            f"cannot compare cubes in {a.frame.value} and {b.frame.value} frames"
        )
    return math.dist((a.x, a.y, a.z), (b.x, b.y, b.z))


def cube_volume(c: Cube) -> float:
    """Box volume w * h * l in cubic meters."""
    return c.w * c.h * c.l


def roi_bounds(bbox: BBox2D, width: int, height: int) -> tuple[int, int, int, int] | None:
    """Pixel rectangle covered by a box, clamped to the image.

    A pixel column c belongs to the ROI when floor(u_min) <= c < ceil(u_max);
    rows likewise.

    Args:
        bbox: Detector box.
        width: Image width (pixels).
        height: Image height (pixels).

    Returns:
        (row0, row1, col0, col1) half-open bounds, or None when the clamped
        rectangle is empty.
    """
    col0 = max(0, math.floor(bbox.u_min))
    col1 = min(width, math.ceil(bbox.u_max))
    row0 = max(0, math.floor(bbox.v_min))
    row1 = min(height, math.ceil(bbox.v_max))
    if col0 >= col1 or row0 >= row1:
        return None
    return (row0, row1, col0, col1)
