"""Tests for camera, pose, box, and cube models.

This module tests field validation on CameraIntrinsics, quaternion
normalization on Pose6D, and the derived box edges and cube accessors.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from fruit_census.models.geometry import BBox2D, CameraIntrinsics, Cube, CubeFrame, Pose6D


class TestCameraIntrinsics:
    """Tests for CameraIntrinsics validation and helpers."""

    def test_defaults_describe_848x480_sensor(self):
        """Test default intrinsics.

        Given: No arguments
        When: CameraIntrinsics is created
        Then: Image size and depth window match the tracking camera
        """
        # Act
        intr = CameraIntrinsics()

        # Assert
        assert (intr.width, intr.height) == (848, 480)
        assert intr.min_depth == 0.07
        assert intr.max_depth == 1.0
        assert intr.depth_scale == 0.001

    @pytest.mark.parametrize(
        ("field", "value"),
        [("fx", 0.0), ("fy", -1.0), ("width", 0), ("depth_scale", 0.0)],
    )
    def test_rejects_non_positive_parameters(self, field, value):
        """Test positive-only fields.

        Given: A zero or negative focal length, size, or scale
        When: CameraIntrinsics is created
        Then: ValidationError is raised
        """
        with pytest.raises(ValidationError):
            CameraIntrinsics(**{field: value})

    def test_rejects_principal_point_outside_image(self):
        """Test cx must lie inside the image."""
        with pytest.raises(ValidationError, match="cx"):
            CameraIntrinsics(cx=900.0)

    def test_rejects_inverted_depth_window(self):
        """Test min_depth must be below max_depth."""
        with pytest.raises(ValidationError, match="min_depth"):
            CameraIntrinsics(min_depth=1.5, max_depth=1.0)

    def test_depth_in_range_is_inclusive(self):
        """Test both window ends are accepted."""
        intr = CameraIntrinsics()

        assert intr.depth_in_range(0.07)
        assert intr.depth_in_range(1.0)
        assert not intr.depth_in_range(1.2)
        assert not intr.depth_in_range(0.05)

    def test_depth_units_conversion(self):
        """Test 1000 raw units at 0.001 m/unit is 1.0 m and back."""
        intr = CameraIntrinsics()

        assert 1000 * intr.depth_scale == pytest.approx(1.0)
        assert intr.depth_to_units(1.0) == 1000
        assert intr.max_depth_units == 1000

    def test_is_frozen(self):
        """Test intrinsics cannot be modified after creation."""
        intr = CameraIntrinsics()

        with pytest.raises(ValidationError):
            intr.fx = 1.0


class TestPose6D:
    """Tests for Pose6D quaternion handling and transforms."""

    def test_identity_pose_leaves_points_unchanged(self):
        """Test identity pose maps a point to itself both ways."""
        pose = Pose6D.identity()
        point = np.array([0.1, -0.2, 0.5])

        np.testing.assert_allclose(pose.camera_to_world(point), point)
        np.testing.assert_allclose(pose.world_to_camera(point), point)

    def test_near_unit_quaternion_is_renormalized(self):
        """Test quaternions within tolerance are normalized.

        Given: A quaternion with norm 1 + 5e-7
        When: Pose6D is created
        Then: The stored quaternion has unit norm
        """
        # Arrange
        scale = 1.0 + 5e-7

        # Act
        pose = Pose6D(rotation=(0.0, 0.0, 0.0, scale))

        # Assert
        assert math.sqrt(sum(c * c for c in pose.rotation)) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_unit_quaternion(self):
        """Test quaternions far from unit norm are rejected."""
        with pytest.raises(ValidationError, match="quaternion norm"):
            Pose6D(rotation=(0.0, 0.0, 0.0, 2.0))

    def test_transforms_are_inverse(self):
        """Test world_to_camera undoes camera_to_world for a rotated, shifted pose."""
        from scipy.spatial.transform import Rotation

        pose = Pose6D.from_rotation(
            Rotation.from_euler("zyx", [30, -20, 10], degrees=True), (1.0, 2.0, 3.0)
        )
        point = np.array([0.3, -0.1, 0.7])

        np.testing.assert_allclose(pose.world_to_camera(pose.camera_to_world(point)), point)

    def test_round_trips_through_json(self):
        """Test pose serialization keeps translation and rotation."""
        pose = Pose6D(translation=(1.0, 2.0, 3.0), rotation=(0.0, 0.0, 0.0, 1.0))

        restored = Pose6D.model_validate_json(pose.model_dump_json())

        assert restored == pose


class TestBBox2D:
    """Tests for BBox2D edges and validation."""

    def test_edges_from_center_and_size(self):
        """Test derived box edges."""
        box = BBox2D(u=100.0, v=50.0, du=20.0, dv=10.0, class_id=2, frame_id=0)

        assert (box.u_min, box.u_max) == (90.0, 110.0)
        assert (box.v_min, box.v_max) == (45.0, 55.0)

    def test_rejects_zero_size(self):
        """Test box sizes must be positive."""
        with pytest.raises(ValidationError):
            BBox2D(u=0.0, v=0.0, du=0.0, dv=5.0, class_id=0, frame_id=0)

    def test_rejects_confidence_above_one(self):
        """Test confidence is a probability."""
        with pytest.raises(ValidationError):
            BBox2D(u=0.0, v=0.0, du=5.0, dv=5.0, class_id=0, confidence=1.5, frame_id=0)

    def test_intersects_image(self):
        """Test boxes fully outside the image are detected."""
        inside = BBox2D(u=5.0, v=5.0, du=4.0, dv=4.0, class_id=0, frame_id=0)
        outside = BBox2D(u=-10.0, v=5.0, du=4.0, dv=4.0, class_id=0, frame_id=0)

        assert inside.intersects_image(8, 6)
        assert not outside.intersects_image(8, 6)


class TestCube:
    """Tests for Cube accessors and validation."""

    def test_center_and_extents(self):
        """Test cube accessors."""
        cube = Cube(x=1.0, y=2.0, z=3.0, w=0.1, h=0.2, l=0.3)

        np.testing.assert_array_equal(cube.center, [1.0, 2.0, 3.0])
        assert cube.extents == (0.1, 0.2, 0.3)
        assert cube.frame == CubeFrame.WORLD

    def test_rejects_non_positive_extent(self):
        """Test extents must be positive."""
        with pytest.raises(ValidationError):
            Cube(x=0.0, y=0.0, z=0.0, w=0.1, h=0.0, l=0.1)
