"""Integration tests for the complete simulate-track-estimate-evaluate pipeline.

Tests the end-to-end execution of the graph on simulated flights.
"""

import numpy as np
import pytest

from fruit_census.main import run_pipeline
from fruit_census.models.estimation import YieldConfig
from fruit_census.models.run_config import RunConfig
from fruit_census.models.simulation import NoiseSpec, SceneSpec, ScriptedOcclusion, TrajectorySpec
from fruit_census.services.geometry import project_point
from fruit_census.services.simulator import export, generate_scene, generate_trajectory, simulate


def _tree(root):
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


@pytest.mark.integration
@pytest.mark.slow
class TestNoiselessFlight:
    """Acceptance on the full 13.2 m lane without noise."""

    def test_every_fruit_counted_once(self, noiseless_config):
        """Test a noiseless flight recovers every fruit.

        Given: 50 fruit on a 13.2 m lane and a noiseless detector
        When: The pipeline runs with fitted weights
        Then: Counting accuracy is 100%, centers are within 2 mm, and the
              total weight is within 2%
        """
        # Arrange
        config = noiseless_config.model_copy(
            update={"yield_": YieldConfig(weight_model="fitted")}
        )

        # Act
        state = run_pipeline(config, out_dir=None)

        # Assert
        metrics = state["metrics"]
        assert state["dataset"].manifest.frame_count == 198
        assert metrics.true_count == 50
        assert metrics.estimated_count == 50
        assert metrics.counting_accuracy == pytest.approx(100.0)
        assert metrics.duplicate_tracks == 0
        assert metrics.precision == pytest.approx(100.0)
        assert metrics.recall == pytest.approx(100.0)
        assert max(p.error for p in state["match"].pairs) <= 0.002
        assert metrics.total_weight_error < 2.0

    def test_sampled_frames_show_every_visible_fruit(self, noiseless_config):
        """Test reprojected tracks match visible fruit frame by frame.

        Given: A noiseless flight sampled once per second
        When: Reliable tracks are reprojected into the sampled frames
        Then: Each frame shows as many tracks as fruit in the left half,
              up to fruit sitting within 3 px of the half-plane edges
        """
        # Arrange / Act
        state = run_pipeline(noiseless_config, out_dir=None)

        # Assert
        report = state["frame_samples"]
        dataset = state["dataset"]
        intr = dataset.intrinsics
        assert [row.frame_id for row in report.rows] == list(range(0, 198, 30))
        assert report.total_visible > 0
        for row in report.rows:
            pose = dataset.pose(row.frame_id)
            pixels = [project_point(f.center, pose, intr) for f in dataset.ground_truth.fruits]
            on_edge = sum(
                1
                for p in pixels
                if p is not None and min(abs(p[0]), abs(p[0] - intr.width / 2)) <= 3.0
            )
            assert abs(row.positive_tracks - row.visible_fruits) <= on_edge

    def test_tilted_camera(self, noiseless_config):
        """Test the tilted mounting still counts at least 90% of the fruit."""
        config = noiseless_config.model_copy(
            update={"trajectory": TrajectorySpec(mounting="tilted", yaw_deg=30.0)}
        )

        state = run_pipeline(config, out_dir=None)

        assert state["metrics"].counting_accuracy >= 90.0


@pytest.mark.integration
@pytest.mark.slow
class TestNoisyFlights:
    """Default noise over several seeds."""

    def test_mean_counting_accuracy(self):
        """Test mean counting accuracy over 10 seeds is at least 90%."""
        accuracies = [
            run_pipeline(RunConfig(seed=seed), out_dir=None)["metrics"].counting_accuracy
            for seed in range(10)
        ]

        assert float(np.mean(accuracies)) >= 90.0


@pytest.mark.integration
class TestDoubleCounting:
    """A scripted occluder creates a phantom track in front of a fruit."""

    @staticmethod
    def _config(with_occluder):
        scene = SceneSpec(lane_length=3.0, fruit_count=8, fruits_per_cluster=1, min_separation=0.15)
        config = RunConfig(seed=3, scene=scene, noise=NoiseSpec.noiseless())
        if not with_occluder:
            return config

        fruit = generate_scene(scene, config.seed)[0]
        poses = generate_trajectory(config.trajectory, scene.lane_length, scene.row_offset)
        offsets = []
        for record in poses:
            pixel = project_point(fruit.center, record.pose, config.camera)
            if pixel is not None:
                offsets.append((abs(pixel[0] - config.camera.cx), record.frame_id))
        closest = min(offsets)[1]
        occlusion = ScriptedOcclusion(
            fruit_id=fruit.id,
            first_frame=max(closest - 1, 0),
            frame_count=3,
            coverage=0.6,
            depth_offset=0.15,
        )
        noise = config.noise.model_copy(update={"scripted_occlusions": [occlusion]})
        return config.model_copy(update={"noise": noise})

    def test_occluder_creates_duplicate_track(self):
        """Test 3 occluded frames chain into one reliable duplicate.

        Given: A 60% occluder 0.15 m in front of fruit 0 for 3 frames
        When: The pipeline runs
        Then: The occluded detections form a reliable track that is
              reported as a duplicate of fruit 0
        """
        # Act
        state = run_pipeline(self._config(with_occluder=True), out_dir=None)

        # Assert
        assert state["metrics"].duplicate_tracks >= 1
        assert 0 not in state["match"].unmatched_fruits

    def test_no_duplicate_without_occluder(self):
        """Test the same flight without the occluder has no duplicates."""
        state = run_pipeline(self._config(with_occluder=False), out_dir=None)

        assert state["metrics"].duplicate_tracks == 0


@pytest.mark.integration
class TestArtifacts:
    """Artifact layout and reproducibility."""

    def test_same_seed_writes_identical_artifacts(self, tmp_path):
        """Test two runs of one configuration are byte-identical.

        Given: A noisy 2 m flight with a fixed seed
        When: The pipeline runs twice into separate directories
        Then: Every artifact matches byte for byte
        """
        # Arrange
        config = RunConfig(seed=5, scene=SceneSpec(lane_length=2.0, fruit_count=8))

        # Act
        run_pipeline(config, tmp_path / "a")
        run_pipeline(config, tmp_path / "b")

        # Assert
        first, second = _tree(tmp_path / "a"), _tree(tmp_path / "b")
        assert first == second
        for name in (
            "config.json",
            "tracks.jsonl",
            "yield_report.json",
            "metrics.json",
            "frame_samples.json",
            "overlay.jsonl",
            "dataset/manifest.json",
            "dataset/ground_truth.json",
        ):
            assert name in first

    def test_loaded_dataset_matches_simulated_run(self, small_config, tmp_path):
        """Test tracking an exported dataset reproduces the simulated run."""
        export(simulate(small_config), tmp_path / "ds")

        simulated = run_pipeline(small_config, out_dir=None)
        loaded = run_pipeline(small_config, out_dir=None, dataset_dir=tmp_path / "ds")

        assert loaded["simulated"] is False
        assert loaded["tracks"] == simulated["tracks"]
        assert loaded["metrics"] == simulated["metrics"]

    def test_tracking_only_run(self, small_config, tmp_path):
        """Test the tracking-only graph writes tracks but no report."""
        state = run_pipeline(
            small_config, tmp_path, with_estimate=False, with_evaluation=False
        )

        assert "yield_report" not in state
        assert (tmp_path / "tracks.jsonl").is_file()
        assert not (tmp_path / "yield_report.json").exists()
