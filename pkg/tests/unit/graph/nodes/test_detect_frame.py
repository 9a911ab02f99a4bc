"""Unit tests for the detect_frame node.

Tests that detect_frame lifts one synchronized frame's boxes to
world-frame detections and returns them for the add reducer.
"""

import pytest

from fruit_census.graph.nodes.detect_frame import detect_frame
from fruit_census.models.dataset import SyncedFrame
from fruit_census.models.geometry import Pose6D


class TestDetectFrame:
    """Tests for detect_frame."""

    def test_centered_box_lifts_to_optical_axis(self, make_dataset, make_bbox):
        """Test a box on the principal point lands on the optical axis.

        Given: A 2x2 box at the tiny camera's center over constant 0.5 m depth
        When: detect_frame is executed
        Then: One detection at (0, 0, 0.5) is returned as a one-item list
        """
        # Arrange
        box = make_bbox(u=4.0, v=3.0, du=2.0, dv=2.0, frame_id=1)
        frame = SyncedFrame(frame_id=1, pose=Pose6D.identity(), detections=[box])

        # Act
        result = detect_frame({"frame": frame, "dataset": make_dataset()})

        # Assert
        assert len(result["frame_detections"]) == 1
        frame_result = result["frame_detections"][0]
        assert frame_result.frame_id == 1
        assert len(frame_result.detections) == 1
        assert frame_result.detections[0].cube.center == pytest.approx((0.0, 0.0, 0.5))

    def test_off_image_box_is_counted(self, make_dataset, make_bbox):
        """Test a box outside the image yields no detection and one rejection."""
        box = make_bbox(u=-50.0, v=3.0, du=2.0, dv=2.0, frame_id=0)
        frame = SyncedFrame(frame_id=0, pose=Pose6D.identity(), detections=[box])

        result = detect_frame({"frame": frame, "dataset": make_dataset()})

        frame_result = result["frame_detections"][0]
        assert frame_result.detections == []
        assert frame_result.stats.total == 1

    def test_frame_without_boxes(self, make_dataset):
        """Test an empty frame still produces an entry."""
        frame = SyncedFrame(frame_id=2, pose=Pose6D.identity())

        result = detect_frame({"frame": frame, "dataset": make_dataset()})

        assert result["frame_detections"][0].detections == []
