"""Deterministic synthetic greenhouse.

World frame: x along the lane (flight direction), y lateral toward the
row, z up. The row plane sits at ``y = row_offset``; the corridor
centerline is ``y = 0``. Fruit are rendered as fronto-parallel squares
filled with their center depth (splat rendering), painted far to near.

Randomness comes from NumPy's PCG64 generator: the scene uses
``SeedSequence([seed])`` and frame ``k`` uses ``SeedSequence([seed, k])``,
so any frame can be re-rendered on its own and output does not depend on
rendering order. Draw order within a frame is fixed: per candidate fruit
in id order (occluder, miss, jitter), then depth noise, then false
positives.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy.spatial.transform import Rotation

from fruit_census.exceptions import SimulationError
from fruit_census.models.dataset import (
    DEPTH_INVALID,
    DatasetManifest,
    DepthFrame,
    DetectionRecord,
    GroundTruth,
    GroundTruthFruit,
    PoseRecord,
)
from fruit_census.models.detection import FruitClass
from fruit_census.models.estimation import CALIBRATION_POINTS
from fruit_census.models.geometry import BBox2D, Pose6D
from fruit_census.services.dataset import Dataset, write_dataset
from fruit_census.services.estimation import fit_weight_quadratic, weight_from_height
from fruit_census.services.geometry import roi_bounds

if TYPE_CHECKING:
    from collections.abc import Sequence

    from fruit_census.models.estimation import WeightModel
    from fruit_census.models.geometry import CameraIntrinsics
    from fruit_census.models.run_config import RunConfig
    from fruit_census.models.simulation import NoiseSpec, SceneSpec, TrajectorySpec

logger = logging.getLogger(__name__)

CORRIDOR_CLEARANCE = 0.185
"""Largest lateral camera offset from the corridor centerline.

A 0.82 m corridor less a 0.45 m wheelbase leaves 0.185 m each side.
"""

PLACEMENT_ATTEMPTS = 2000
FALSE_POSITIVE_ATTEMPTS = 20

# camera x -> world +x, camera y (down) -> world -z, optical axis -> world +y
FORWARD_MOUNT = Rotation.from_matrix([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])


def scene_rng(seed: int) -> np.random.Generator:
    """Generator for scene placement."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))


def frame_rng(seed: int, frame_id: int) -> np.random.Generator:
    """Independent generator for one rendered frame."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, frame_id])))


# --- scene ------------------------------------------------------------------


def generate_scene(
    spec: SceneSpec,
    seed: int,
    weight_model: WeightModel | None = None,
) -> list[GroundTruthFruit]:
    """Place fruit along the lane.

    Fruit come in clusters of ``fruits_per_cluster``. Each fruit is drawn
    around its cluster center and redrawn until it is at least
    ``min_separation`` from every placed fruit in the row (x-z) plane;
    after half the attempts it may land anywhere in the lane.

    Args:
        spec: Placement parameters.
        seed: Scene seed.
        weight_model: Maps diameter (mm) to weight (g). Defaults to the
            quadratic fitted through the calibration samples.

    Returns:
        Fruit in id order.

    Raises:
        SimulationError: If a fruit cannot be placed with the required separation.
    """
    model = weight_model or fit_weight_quadratic(CALIBRATION_POINTS)
    rng = scene_rng(seed)

    n_clusters = math.ceil(spec.fruit_count / spec.fruits_per_cluster)
    cluster_x = rng.uniform(0.0, spec.lane_length, n_clusters)
    cluster_z = rng.uniform(spec.height_min, spec.height_max, n_clusters)

    placed: list[tuple[float, float]] = []
    fruits: list[GroundTruthFruit] = []
    for fruit_id in range(spec.fruit_count):
        cluster = fruit_id // spec.fruits_per_cluster
        for attempt in range(PLACEMENT_ATTEMPTS):
            if attempt < PLACEMENT_ATTEMPTS // 2:
                dx, dz = rng.normal(0.0, 1.0, 2) * spec.cluster_spread
                x = float(np.clip(cluster_x[cluster] + dx, 0.0, spec.lane_length))
                z = float(np.clip(cluster_z[cluster] + dz, spec.height_min, spec.height_max))
            else:
                x = float(rng.uniform(0.0, spec.lane_length))
                z = float(rng.uniform(spec.height_min, spec.height_max))
            if all(math.dist((x, z), p) >= spec.min_separation for p in placed):
                break
        else:
            raise SimulationError(
                f"cannot place fruit {fruit_id} at least {spec.min_separation} m from "
                f"{len(placed)} others on a {spec.lane_length} m lane"
            )
        placed.append((x, z))

        y = spec.row_offset + float(rng.uniform(-spec.band_depth / 2, spec.band_depth / 2))
        diameter = float(rng.uniform(spec.diameter_min, spec.diameter_max))
        ripened = bool(rng.random() < spec.ripened_fraction)
        fruits.append(
            GroundTruthFruit(
                id=fruit_id,
                center=(x, y, z),
                diameter=diameter,
                class_id=int(FruitClass.RIPENED if ripened else FruitClass.UNRIPENED),
                weight=weight_from_height(diameter * 1000.0, model),
            )
        )

    logger.info(
        "generate_scene: %d fruit in %d clusters over %.1f m (seed %d)",
        len(fruits),
        n_clusters,
        spec.lane_length,
        seed,
    )
    return fruits


# --- trajectory -------------------------------------------------------------


def mounting_rotation(spec: TrajectorySpec) -> Rotation:
    """Camera-to-world rotation for the configured mounting."""
    if spec.mounting == "tilted":
        offset = Rotation.from_euler("yx", [spec.yaw_deg, spec.pitch_deg], degrees=True)
        return FORWARD_MOUNT * offset
    return FORWARD_MOUNT


def frame_count(lane_length: float, spec: TrajectorySpec) -> int:
    """Frames needed to cover the lane: ceil(lane_length / speed * frame_rate)."""
    # tolerance absorbs representation error, e.g. 13.2 / 2 * 30
    return max(1, math.ceil(lane_length / spec.speed * spec.frame_rate - 1e-9))


def generate_trajectory(
    spec: TrajectorySpec,
    lane_length: float,
    row_offset: float = 0.42,
) -> list[PoseRecord]:
    """Straight constant-speed flight along +x.

    The camera stays ``row_distance`` in front of the row plane at a fixed
    height, starting at x = 0.

    Args:
        spec: Flight parameters.
        lane_length: Lane length (meters).
        row_offset: World y of the row plane (meters).

    Returns:
        One pose record per frame.
    """
    n_frames = frame_count(lane_length, spec)
    lateral = row_offset - spec.row_distance
    if abs(lateral) > CORRIDOR_CLEARANCE:
        logger.warning(
            "generate_trajectory: camera %.3f m off the corridor centerline (limit %.3f m)",
            lateral,
            CORRIDOR_CLEARANCE,
            extra={"event_type": "corridor_clearance", "lateral_offset": lateral},
        )

    rotation = mounting_rotation(spec)
    step = spec.speed / spec.frame_rate
    records = [
        PoseRecord(
            frame_id=k,
            pose=Pose6D.from_rotation(rotation, (k * step, lateral, spec.height)),
            timestamp=k / spec.frame_rate,
        )
        for k in range(n_frames)
    ]
    logger.info(
        "generate_trajectory: %d frames, %.4f m/frame, %s mounting",
        n_frames,
        step,
        spec.mounting,
    )
    return records


# --- rendering --------------------------------------------------------------


class _Candidate(NamedTuple):
    fruit: GroundTruthFruit
    u: float
    v: float
    du: float
    dv: float
    depth: float
    bounds: tuple[int, int, int, int]


class _Surface(NamedTuple):
    depth: float
    bounds: tuple[int, int, int, int]
    label: int  # candidate index, -1 for occluders


def _candidates(
    fruits: Sequence[GroundTruthFruit],
    pose: Pose6D,
    intr: CameraIntrinsics,
    noise: NoiseSpec,
    frame_id: int,
) -> list[_Candidate]:
    candidates = []
    for fruit in fruits:
        x, y, z = pose.world_to_camera(np.asarray(fruit.center))
        if not intr.min_depth < z <= intr.max_depth:
            continue
        u = intr.fx * x / z + intr.cx
        v = intr.fy * y / z + intr.cy
        if not (0 <= u < intr.width and 0 <= v < intr.height):
            continue
        du = intr.fx * fruit.diameter / z
        dv = intr.fy * fruit.diameter / z
        if min(du, dv) < noise.min_box_px:
            continue
        box = BBox2D(u=u, v=v, du=du, dv=dv, class_id=fruit.class_id, frame_id=frame_id)
        bounds = roi_bounds(box, intr.width, intr.height)
        if bounds is None:
            continue
        candidates.append(_Candidate(fruit, float(u), float(v), du, dv, float(z), bounds))
    return candidates


def _occluder_bounds(
    bounds: tuple[int, int, int, int], coverage: float
) -> tuple[int, int, int, int]:
    """Left strip of a rectangle spanning ``coverage`` of its columns."""
    row0, row1, col0, col1 = bounds
    return (row0, row1, col0, col0 + math.ceil(coverage * (col1 - col0)))


def render_frame(
    fruits: Sequence[GroundTruthFruit],
    pose: Pose6D,
    intr: CameraIntrinsics,
    noise: NoiseSpec,
    rng: np.random.Generator,
    frame_id: int = 0,
) -> tuple[list[BBox2D], DepthFrame]:
    """Render detector boxes and a depth frame for one camera pose.

    Args:
        fruits: Scene fruit.
        pose: Camera pose.
        intr: Camera intrinsics.
        noise: Noise parameters.
        rng: Generator for this frame.
        frame_id: Frame id stamped on boxes and depth.

    Returns:
        Boxes (fruit in id order, then false positives) and the depth frame.
    """
    candidates = _candidates(fruits, pose, intr, noise, frame_id)

    surfaces: list[_Surface] = []
    keep: list[bool] = []
    jitter: list[np.ndarray] = []
    for index, cand in enumerate(candidates):
        random_occluder = rng.random() < noise.occluder_probability
        missed = rng.random() < noise.miss_rate
        jitter.append(rng.normal(0.0, 1.0, 2) * noise.pixel_sigma)
        keep.append(not missed)

        surfaces.append(_Surface(cand.depth, cand.bounds, index))
        scripted = [
            o
            for o in noise.scripted_occlusions
            if o.fruit_id == cand.fruit.id and o.active(frame_id)
        ]
        for occlusion in scripted:
            surfaces.append(
                _Surface(
                    cand.depth - occlusion.depth_offset,
                    _occluder_bounds(cand.bounds, occlusion.coverage),
                    -1,
                )
            )
        if random_occluder and not scripted:
            surfaces.append(
                _Surface(
                    cand.depth - noise.occluder_offset,
                    _occluder_bounds(cand.bounds, noise.occluder_coverage),
                    -1,
                )
            )

    meters = np.zeros((intr.height, intr.width), dtype=np.float64)
    painted = np.zeros((intr.height, intr.width), dtype=bool)
    labels = np.full((intr.height, intr.width), -1, dtype=np.int64)
    # painter's algorithm: far first, stable for equal depths
    for surface in sorted(surfaces, key=lambda s: -s.depth):
        row0, row1, col0, col1 = surface.bounds
        meters[row0:row1, col0:col1] = surface.depth
        painted[row0:row1, col0:col1] = True
        if surface.label >= 0:
            labels[row0:row1, col0:col1] = surface.label

    meters[painted] += rng.normal(0.0, 1.0, int(painted.sum())) * noise.depth_sigma
    values = np.zeros((intr.height, intr.width), dtype=np.uint16)
    values[painted] = np.clip(
        np.rint(meters[painted] / intr.depth_scale), 1, intr.max_depth_units
    ).astype(np.uint16)

    boxes: list[BBox2D] = []
    for index, cand in enumerate(candidates):
        if not keep[index]:
            continue
        row0, row1, col0, col1 = cand.bounds
        roi_labels = labels[row0:row1, col0:col1]
        visible = float(np.count_nonzero(roi_labels == index)) / roi_labels.size
        if visible < noise.min_visible_fraction:
            continue
        du_, dv_ = jitter[index]
        boxes.append(
            BBox2D(
                u=cand.u + float(du_),
                v=cand.v + float(dv_),
                du=cand.du,
                dv=cand.dv,
                class_id=cand.fruit.class_id,
                frame_id=frame_id,
            )
        )

    boxes.extend(_false_positives(values, intr, noise, rng, frame_id))
    return boxes, DepthFrame(frame_id=frame_id, width=intr.width, height=intr.height, values=values)


def _false_positives(
    values: np.ndarray,
    intr: CameraIntrinsics,
    noise: NoiseSpec,
    rng: np.random.Generator,
    frame_id: int,
) -> list[BBox2D]:
    """Spurious boxes over mostly invalid depth; painted with depth if configured.

    Writes into ``values`` when ``fp_with_depth`` is set.
    """
    boxes = []
    side_min = max(noise.min_box_px, 4.0)
    for _ in range(int(rng.poisson(noise.false_positive_rate))):
        placed = None
        for _ in range(FALSE_POSITIVE_ATTEMPTS):
            u, v = rng.uniform(0.0, intr.width), rng.uniform(0.0, intr.height)
            du, dv = rng.uniform(side_min, 3 * side_min, 2)
            box = BBox2D(
                u=float(u), v=float(v), du=float(du), dv=float(dv), class_id=0, frame_id=frame_id
            )
            bounds = roi_bounds(box, intr.width, intr.height)
            if bounds is None:
                continue
            row0, row1, col0, col1 = bounds
            roi = values[row0:row1, col0:col1]
            if np.count_nonzero(roi == DEPTH_INVALID) * 2 > roi.size:
                placed = (box, bounds)
                break
        class_id = int(rng.integers(int(FruitClass.UNRIPENED), int(FruitClass.RIPENED) + 1))
        fake_depth = float(rng.uniform(intr.min_depth, intr.max_depth))
        if placed is None:
            logger.debug("render_frame: frame %d: no free area for a false positive", frame_id)
            continue
        box, (row0, row1, col0, col1) = placed
        if noise.fp_with_depth:
            roi = values[row0:row1, col0:col1]
            roi[roi == DEPTH_INVALID] = min(intr.depth_to_units(fake_depth), intr.max_depth_units)
        boxes.append(box.model_copy(update={"class_id": class_id}))
    return boxes


# --- whole runs ---------------------------------------------------------------


def simulate(config: RunConfig) -> Dataset:
    """Simulate a full flight and return it as an in-memory dataset.

    Boxes are rendered once up front; depth frames are re-rendered from the
    frame's own generator whenever they are requested, so the dataset is
    identical however often or in whatever order frames are read.

    Args:
        config: Run configuration (seed, camera, scene, trajectory, noise).

    Returns:
        Dataset with ground truth attached.
    """
    seed = config.seed
    intr = config.camera
    fruits = generate_scene(config.scene, seed)
    poses = generate_trajectory(
        config.trajectory, config.scene.lane_length, config.scene.row_offset
    )
    pose_by_frame = {record.frame_id: record.pose for record in poses}

    def render(frame_id: int) -> tuple[list[BBox2D], DepthFrame]:
        return render_frame(
            fruits, pose_by_frame[frame_id], intr, config.noise, frame_rng(seed, frame_id), frame_id
        )

    detections = [
        DetectionRecord(frame_id=record.frame_id, bbox=bbox)
        for record in poses
        for bbox in render(record.frame_id)[0]
    ]

    logger.info(
        "simulate: seed %d, %d fruit, %d frames, %d boxes",
        seed,
        len(fruits),
        len(poses),
        len(detections),
    )
    return Dataset(
        manifest=DatasetManifest(
            frame_count=len(poses),
            frame_rate=config.trajectory.frame_rate,
            ground_truth="ground_truth.json",
        ),
        intrinsics=intr,
        poses=poses,
        detections=detections,
        depth_frame_ids=pose_by_frame,
        depth_loader=lambda frame_id: render(frame_id)[1],
        ground_truth=GroundTruth(fruits=fruits),
    )


def export(dataset: Dataset, root: Path | str) -> Path:
    """Write a simulated dataset, ground truth included, to ``root``."""
    return write_dataset(dataset, Path(root))
