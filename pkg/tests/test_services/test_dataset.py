"""Tests for the dataset directory reader and writer.

This module tests frame synchronization, the 16-bit PGM depth codec,
dataset loading errors, and write/load round trips.
"""

import json

import numpy as np
import pytest

from fruit_census.exceptions import DatasetError
from fruit_census.models.dataset import DepthFrame, DetectionRecord, GroundTruth
from fruit_census.models.geometry import BBox2D
from fruit_census.services.dataset import (
    decode_depth_pgm,
    encode_depth_pgm,
    frames,
    load_dataset,
    read_depth_pgm,
    read_tracks,
    write_dataset,
    write_depth_pgm,
    write_tracks,
)


def _detection(frame_id, u=4.0):
    return DetectionRecord(
        frame_id=frame_id,
        bbox=BBox2D(u=u, v=3.0, du=2.0, dv=2.0, class_id=2, frame_id=frame_id),
    )


# =============================================================================
# Synchronization
# =============================================================================


class TestSynchronize:
    """Tests for Dataset.synchronize and frames()."""

    def test_detections_only_on_middle_frame(self, make_dataset):
        """Test frames without detections are still yielded.

        Given: 3 poses and detections only on frame 2
        When: frames() is iterated
        Then: 3 frames are yielded and only the middle one has boxes
        """
        # Arrange
        dataset = make_dataset(pose_ids=(1, 2, 3), detections=[_detection(2), _detection(2)])

        # Act
        result = list(frames(dataset))

        # Assert
        assert [fid for fid, *_ in result] == [1, 2, 3]
        assert [len(boxes) for _, _, boxes, _ in result] == [0, 2, 0]
        assert all(isinstance(depth, DepthFrame) for *_, depth in result)

    def test_detection_without_pose_is_dropped(self, make_dataset, caplog):
        """Test a detection on an unknown frame is dropped and counted."""
        dataset = make_dataset(pose_ids=(0, 1), detections=[_detection(0), _detection(7)])

        sync = dataset.synchronize()

        assert sync.dropped_detections == 1
        assert sync.detection_count == 1
        assert "detections dropped" in caplog.text

    def test_depth_without_pose_is_skipped(self, make_dataset):
        """Test depth frames without a pose record are skipped."""
        dataset = make_dataset(pose_ids=(0, 1), depth_ids=(0, 1, 2))

        sync = dataset.synchronize()

        assert [f.frame_id for f in sync.frames] == [0, 1]
        assert sync.skipped_frames == 1

    def test_pose_without_depth_is_counted(self, make_dataset):
        """Test pose records without depth are excluded and counted."""
        dataset = make_dataset(pose_ids=(0, 1, 2), depth_ids=(0, 2), detections=[_detection(1)])

        sync = dataset.synchronize()

        assert [f.frame_id for f in sync.frames] == [0, 2]
        assert sync.missing_depth == 1
        assert sync.dropped_detections == 1

    def test_aligned_files_yield_one_frame_per_pose(self, make_dataset):
        """Test frame count equals pose count when everything aligns."""
        dataset = make_dataset(pose_ids=tuple(range(5)))

        assert len(list(dataset.frames())) == 5

    def test_absent_depth_frame_raises(self, make_dataset):
        """Test requesting a missing depth frame is a dataset error."""
        dataset = make_dataset(pose_ids=(0,))

        with pytest.raises(DatasetError, match="no depth frame 5"):
            dataset.depth(5)


# =============================================================================
# PGM Codec
# =============================================================================


class TestDepthPgm:
    """Tests for the 16-bit PGM depth codec."""

    def test_all_zero_frame_round_trips(self, tmp_path):
        """Test an all-invalid frame survives write and read."""
        frame = DepthFrame(frame_id=4, width=8, height=6, values=np.zeros((6, 8)))

        path = write_depth_pgm(frame, tmp_path / "000004.pgm")

        assert read_depth_pgm(path) == frame

    @pytest.mark.parametrize("seed", range(100))
    def test_random_frame_round_trips_bit_exact(self, seed):
        """Test random 16-bit content is preserved exactly."""
        rng = np.random.default_rng(seed)
        height, width = (int(n) for n in rng.integers(1, 24, 2))
        values = rng.integers(0, 65536, (height, width), dtype=np.uint16)
        frame = DepthFrame(frame_id=seed, width=width, height=height, values=values)

        decoded = decode_depth_pgm(encode_depth_pgm(frame), seed, "<memory>")

        assert decoded == frame

    def test_header_is_big_endian_p5(self):
        """Test the encoded header and byte order."""
        frame = DepthFrame(frame_id=0, width=2, height=1, values=[1, 258])

        data = encode_depth_pgm(frame)

        assert data == b"P5\n2 1\n65535\n\x00\x01\x01\x02"

    def test_header_comments_are_skipped(self):
        """Test '#' comments in the header are ignored."""
        data = b"P5\n# written by hand\n2 1\n65535\n\x00\x01\x01\x02"

        frame = decode_depth_pgm(data, 0, "<memory>")

        assert frame.values.tolist() == [[1, 258]]

    def test_rejects_wrong_magic(self):
        """Test ASCII PGM is rejected."""
        with pytest.raises(DatasetError, match="not a binary PGM"):
            decode_depth_pgm(b"P2\n1 1\n65535\n0\n", 0, "x.pgm")

    def test_rejects_8_bit_maxval(self):
        """Test maxval other than 65535 is rejected."""
        with pytest.raises(DatasetError, match="maxval"):
            decode_depth_pgm(b"P5\n1 1\n255\n\x00", 0, "x.pgm")

    def test_rejects_truncated_payload(self):
        """Test a short payload is rejected with its byte count."""
        with pytest.raises(DatasetError, match="truncated PGM payload: 2 of 4"):
            decode_depth_pgm(b"P5\n2 1\n65535\n\x00\x01", 0, "x.pgm")

    def test_rejects_truncated_header(self):
        """Test a header missing fields is rejected."""
        with pytest.raises(DatasetError, match="truncated PGM header"):
            decode_depth_pgm(b"P5\n2 ", 0, "x.pgm")


# =============================================================================
# Loading
# =============================================================================


class TestLoadDataset:
    """Tests for load_dataset and write_dataset."""

    def test_round_trip_preserves_records(self, make_dataset, make_fruit, tmp_path):
        """Test a written dataset loads back identical.

        Given: An in-memory dataset with detections and ground truth
        When: It is written and loaded again
        Then: Records, intrinsics, and depth frames are identical
        """
        # Arrange
        truth = GroundTruth(fruits=[make_fruit(0, 1.0, 0.4, 1.2)])
        dataset = make_dataset(
            pose_ids=(0, 1, 2), detections=[_detection(0), _detection(2)], ground_truth=truth
        )

        # Act
        write_dataset(dataset, tmp_path / "ds")
        loaded = load_dataset(tmp_path / "ds")

        # Assert
        assert loaded.manifest == dataset.manifest
        assert loaded.intrinsics == dataset.intrinsics
        assert loaded.poses == dataset.poses
        assert loaded.detections == dataset.detections
        assert loaded.ground_truth == truth
        assert loaded.depth_frame_ids == dataset.depth_frame_ids
        assert loaded.depth(1) == dataset.depth(1)

    def test_empty_detections_file_is_valid(self, make_dataset, tmp_path):
        """Test a dataset with zero detections loads."""
        write_dataset(make_dataset(), tmp_path)
        (tmp_path / "detections.jsonl").write_text("")

        loaded = load_dataset(tmp_path)

        assert loaded.detections == ()

    def test_missing_depth_directory_names_path(self, make_dataset, tmp_path):
        """Test an absent depth directory is reported with its path."""
        write_dataset(make_dataset(pose_ids=()), tmp_path)
        (tmp_path / "depth").rmdir()

        with pytest.raises(DatasetError, match="depth directory not found") as exc_info:
            load_dataset(tmp_path)

        assert exc_info.value.path == str(tmp_path / "depth")

    def test_missing_manifest(self, tmp_path):
        """Test a directory without a manifest is rejected."""
        with pytest.raises(DatasetError, match="manifest.json"):
            load_dataset(tmp_path)

    def test_malformed_line_reports_line_number(self, make_dataset, tmp_path):
        """Test a bad JSONL record names its file and line."""
        write_dataset(make_dataset(), tmp_path)
        lines = (tmp_path / "poses.jsonl").read_text().splitlines()
        lines[1] = '{"frame_id": "x"}'
        (tmp_path / "poses.jsonl").write_text("\n".join(lines) + "\n")

        with pytest.raises(DatasetError) as exc_info:
            load_dataset(tmp_path)

        assert exc_info.value.line == 2
        assert "poses.jsonl:2" in str(exc_info.value)

    def test_non_increasing_pose_ids(self, make_dataset, tmp_path):
        """Test pose frame ids must strictly increase."""
        write_dataset(make_dataset(), tmp_path)
        lines = (tmp_path / "poses.jsonl").read_text().splitlines()
        (tmp_path / "poses.jsonl").write_text("\n".join([lines[1], lines[0], lines[2]]) + "\n")

        with pytest.raises(DatasetError, match="not greater than previous") as exc_info:
            load_dataset(tmp_path)

        assert exc_info.value.line == 2

    def test_off_image_box_reports_line_number(self, make_dataset, tmp_path):
        """Test a detector box that misses the image is rejected on load.

        Given: A detections file whose second box lies right of the 8x6 image
        When: The dataset is loaded
        Then: DatasetError names detections.jsonl and line 2
        """
        # Arrange
        write_dataset(make_dataset(detections=[_detection(0), _detection(1, u=20.0)]), tmp_path)

        # Act
        with pytest.raises(DatasetError, match="outside the 8x6 image") as exc_info:
            load_dataset(tmp_path)

        # Assert
        assert exc_info.value.line == 2
        assert "detections.jsonl:2" in str(exc_info.value)

    def test_box_overlapping_image_edge_loads(self, make_dataset, tmp_path):
        """Test a box partly off the image is kept."""
        write_dataset(make_dataset(detections=[_detection(0, u=8.5)]), tmp_path)

        loaded = load_dataset(tmp_path)

        assert len(loaded.detections) == 1

    def test_malformed_ground_truth_names_file(self, make_dataset, make_fruit, tmp_path):
        """Test a broken ground_truth.json is a dataset error naming the file."""
        truth = GroundTruth(fruits=[make_fruit(0, 1.0, 0.4, 1.2)])
        write_dataset(make_dataset(ground_truth=truth), tmp_path)
        (tmp_path / "ground_truth.json").write_text('{"fruits": [{"id": 0}]}')

        with pytest.raises(DatasetError, match="invalid GroundTruth") as exc_info:
            load_dataset(tmp_path)

        assert exc_info.value.path == str(tmp_path / "ground_truth.json")

    def test_depth_size_mismatch(self, make_dataset, tmp_path):
        """Test depth frames must match the intrinsics size."""
        write_dataset(make_dataset(pose_ids=(0,)), tmp_path)
        small = DepthFrame(frame_id=0, width=2, height=2, values=np.zeros((2, 2)))
        write_depth_pgm(small, tmp_path / "depth" / "000000.pgm")

        loaded = load_dataset(tmp_path)

        with pytest.raises(DatasetError, match="intrinsics say 8x6"):
            loaded.depth(0)

    def test_manifest_written_last(self, make_dataset, tmp_path):
        """Test the manifest lists every file it references."""
        write_dataset(make_dataset(), tmp_path)

        manifest = json.loads((tmp_path / "manifest.json").read_text())

        for key in ("intrinsics", "poses", "detections"):
            assert (tmp_path / manifest[key]).is_file()


class TestTracksFile:
    """Tests for tracks.jsonl reading and writing."""

    def test_tracks_round_trip(self, make_track, tmp_path):
        """Test tracks survive write and read."""
        tracks = [make_track(0, x=1.0), make_track(1, x=2.0, histogram={2: 2, 1: 1})]

        write_tracks(tracks, tmp_path / "tracks.jsonl")
        restored = read_tracks(tmp_path / "tracks.jsonl")

        assert [t.id for t in restored] == [0, 1]
        assert restored[1].class_histogram == {2: 2, 1: 1}
        assert restored[0].cube == tracks[0].cube

    def test_empty_track_file(self, tmp_path):
        """Test zero tracks write a zero-length file that reads back empty."""
        path = write_tracks([], tmp_path / "tracks.jsonl")

        assert path.stat().st_size == 0
        assert read_tracks(path) == []

    def test_missing_track_file(self, tmp_path):
        """Test an absent tracks file is a dataset error."""
        with pytest.raises(DatasetError, match="file not found"):
            read_tracks(tmp_path / "tracks.jsonl")
