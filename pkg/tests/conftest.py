"""Shared pytest fixtures for fruit census tests.

This module provides common test fixtures used across multiple test files.
Organized by category for easy discovery and maintenance.
"""

import numpy as np
import pytest

# =============================================================================
# Camera Fixtures
# =============================================================================


@pytest.fixture
def intrinsics():
    """Round-number pinhole camera at 848x480.

    Returns:
        CameraIntrinsics with fx=fy=400, principal point at the image center.
    """
    from fruit_census.models.geometry import CameraIntrinsics

    return CameraIntrinsics(fx=400.0, fy=400.0, cx=424.0, cy=240.0)


@pytest.fixture
def tiny_intrinsics():
    """Small 8x6 camera for dataset plumbing tests.

    Returns:
        CameraIntrinsics sized to keep depth files a few bytes long.
    """
    from fruit_census.models.geometry import CameraIntrinsics

    return CameraIntrinsics(fx=10.0, fy=10.0, cx=4.0, cy=3.0, width=8, height=6)


@pytest.fixture
def identity_pose():
    """Camera at the world origin looking down world +z."""
    from fruit_census.models.geometry import Pose6D

    return Pose6D.identity()


# =============================================================================
# Record Factories
# =============================================================================


@pytest.fixture
def make_bbox():
    """Factory for BBox2D with sensible defaults.

    Returns:
        Callable building a box from center, size, class, and frame.
    """
    from fruit_census.models.geometry import BBox2D

    def _make(u=424.0, v=240.0, du=24.0, dv=24.0, class_id=2, frame_id=0):
        return BBox2D(u=u, v=v, du=du, dv=dv, class_id=class_id, frame_id=frame_id)

    return _make


@pytest.fixture
def make_depth():
    """Factory for DepthFrame filled with one raw value.

    Returns:
        Callable building a depth frame from size, fill value, and frame id.
    """
    from fruit_census.models.dataset import DepthFrame

    def _make(width=848, height=480, fill=500, frame_id=0):
        values = np.full((height, width), fill, dtype=np.uint16)
        return DepthFrame(frame_id=frame_id, width=width, height=height, values=values)

    return _make


@pytest.fixture
def make_detection():
    """Factory for world-frame Detection3D at a given center.

    Returns:
        Callable building a detection from center, class, frame, and size.
    """
    from fruit_census.models.detection import Detection3D
    from fruit_census.models.geometry import BBox2D, Cube, CubeFrame

    def _make(x=0.0, y=0.0, z=0.0, frame_id=0, class_id=2, size=0.03):
        return Detection3D(
            cube=Cube(x=x, y=y, z=z, w=size, h=size, l=size, frame=CubeFrame.WORLD),
            class_id=class_id,
            frame_id=frame_id,
            bbox=BBox2D(u=10.0, v=10.0, du=5.0, dv=5.0, class_id=class_id, frame_id=frame_id),
        )

    return _make


@pytest.fixture
def make_track():
    """Factory for Track with a cube at a given center.

    Returns:
        Callable building a track from id, center, extents, and class counts.
    """
    from fruit_census.models.geometry import Cube, CubeFrame
    from fruit_census.models.track import Track

    def _make(
        track_id=0,
        x=0.0,
        y=0.0,
        z=0.0,
        w=0.03,
        h=0.04,
        l=0.035,  # noqa: E741
        class_id=2,
        n_assoc=3,
        histogram=None,
    ):
        return Track(
            id=track_id,
            cube=Cube(x=x, y=y, z=z, w=w, h=h, l=l, frame=CubeFrame.WORLD),
            class_histogram=histogram if histogram is not None else {class_id: n_assoc},
            last_class_id=class_id,
            n_assoc=n_assoc,
            created_frame=0,
            last_matched_frame=0,
        )

    return _make


@pytest.fixture
def make_fruit():
    """Factory for GroundTruthFruit.

    Returns:
        Callable building a fruit from id, center, diameter, class, and weight.
    """
    from fruit_census.models.dataset import GroundTruthFruit

    def _make(fruit_id=0, x=0.0, y=0.0, z=0.0, diameter=0.04, class_id=2, weight=20.0):
        return GroundTruthFruit(
            id=fruit_id,
            center=(x, y, z),
            diameter=diameter,
            class_id=class_id,
            weight=weight,
        )

    return _make


# =============================================================================
# Dataset Fixtures
# =============================================================================


@pytest.fixture
def make_dataset(tiny_intrinsics):
    """Factory for in-memory datasets on the tiny camera.

    Depth frames are constant 500-unit images generated on request.

    Returns:
        Callable building a Dataset from pose ids, detection records,
        depth ids, poses, and ground truth.
    """
    from fruit_census.models.dataset import DatasetManifest, DepthFrame, PoseRecord
    from fruit_census.models.geometry import Pose6D
    from fruit_census.services.dataset import Dataset

    def _make(
        pose_ids=(0, 1, 2),
        detections=(),
        depth_ids=None,
        intrinsics=None,
        poses=None,
        ground_truth=None,
        frame_rate=30.0,
    ):
        intr = intrinsics or tiny_intrinsics
        if poses is None:
            poses = [
                PoseRecord(frame_id=fid, pose=Pose6D.identity(), timestamp=fid / frame_rate)
                for fid in pose_ids
            ]
        ids = list(pose_ids if depth_ids is None else depth_ids)

        def loader(frame_id):
            values = np.full((intr.height, intr.width), 500, dtype=np.uint16)
            return DepthFrame(
                frame_id=frame_id, width=intr.width, height=intr.height, values=values
            )

        return Dataset(
            manifest=DatasetManifest(
                frame_count=len(poses),
                frame_rate=frame_rate,
                ground_truth="ground_truth.json" if ground_truth is not None else None,
            ),
            intrinsics=intr,
            poses=list(poses),
            detections=list(detections),
            depth_frame_ids=ids,
            depth_loader=loader,
            ground_truth=ground_truth,
        )

    return _make


# =============================================================================
# Run Configuration Fixtures
# =============================================================================


@pytest.fixture
def noiseless_config():
    """Default 50-fruit, 13.2 m lane with every imperfection disabled."""
    from fruit_census.models.run_config import RunConfig
    from fruit_census.models.simulation import NoiseSpec

    return RunConfig(seed=7, noise=NoiseSpec.noiseless())


@pytest.fixture
def small_config():
    """Short noiseless lane (2 m, 8 fruit, 30 frames) for fast pipeline runs."""
    from fruit_census.models.run_config import RunConfig
    from fruit_census.models.simulation import NoiseSpec, SceneSpec

    return RunConfig(
        seed=11,
        scene=SceneSpec(lane_length=2.0, fruit_count=8),
        noise=NoiseSpec.noiseless(),
    )
