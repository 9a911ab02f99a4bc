"""Dataset directory reader and writer.

Layout of a dataset root::

    manifest.json
    intrinsics.json
    poses.jsonl
    detections.jsonl
    depth/000000.pgm ...
    ground_truth.json      (optional)

Line-delimited files carry one JSON object per line. Depth frames are
16-bit big-endian binary PGM (P5, maxval 65535) and are read lazily, one
file per request, so concurrent readers never share file handles.
"""

from __future__ import annotations

import itertools
import logging
import re
from pathlib import Path
from typing import TYPE_CHECKING, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from fruit_census.exceptions import DatasetError
from fruit_census.models.dataset import (
    DatasetManifest,
    DepthFrame,
    DetectionRecord,
    FrameSync,
    GroundTruth,
    PoseRecord,
    SyncedFrame,
)
from fruit_census.models.geometry import CameraIntrinsics
from fruit_census.models.track import Track
from fruit_census.services.artifacts import (
    write_bytes_atomic,
    write_json_atomic,
    write_jsonl_atomic,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator

    from fruit_census.models.geometry import BBox2D, Pose6D

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
PGM_MAXVAL = 65535
DEPTH_FILE_PATTERN = re.compile(r"^(\d{6})\.pgm$")

ModelT = TypeVar("ModelT", bound=BaseModel)


def depth_file_name(frame_id: int) -> str:
    """File name of a depth frame inside the depth directory."""
    return f"{frame_id:06d}.pgm"


class Dataset:
    """A loaded (or simulated) dataset.

    Records are held in memory; depth frames come from ``depth_loader``
    on request. A dataset is never modified after construction.

    Attributes:
        manifest: Dataset index.
        intrinsics: Camera model shared by every frame.
        poses: Pose records, strictly increasing frame_id.
        detections: Detection records in file order.
        ground_truth: Ground-truth fruit, if recorded.
        root: Directory the dataset was loaded from (None when in memory).
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        intrinsics: CameraIntrinsics,
        poses: list[PoseRecord],
        detections: list[DetectionRecord],
        depth_frame_ids: Iterable[int],
        depth_loader: Callable[[int], DepthFrame],
        ground_truth: GroundTruth | None = None,
        root: Path | None = None,
    ) -> None:
        """Initialize a dataset.

        Args:
            manifest: Dataset index.
            intrinsics: Camera model.
            poses: Pose records.
            detections: Detection records.
            depth_frame_ids: Frame ids that have a depth frame.
            depth_loader: Returns the depth frame for a frame id.
            ground_truth: Optional ground truth.
            root: Source directory, if any.
        """
        self.manifest = manifest
        self.intrinsics = intrinsics
        self.poses = tuple(poses)
        self.detections = tuple(detections)
        self.ground_truth = ground_truth
        self.root = root
        self._depth_frame_ids = frozenset(depth_frame_ids)
        self._depth_loader = depth_loader
        self._poses_by_frame = {r.frame_id: r for r in self.poses}

    @property
    def depth_frame_ids(self) -> frozenset[int]:
        """Frame ids with a depth frame."""
        return self._depth_frame_ids

    def depth(self, frame_id: int) -> DepthFrame:
        """Read one depth frame.

        Args:
            frame_id: Frame to read.

        Returns:
            The depth frame.

        Raises:
            DatasetError: If the frame is absent or its size disagrees with
                the intrinsics.
        """
        if frame_id not in self._depth_frame_ids:
            raise DatasetError(f"no depth frame {frame_id}", self._depth_location(frame_id))
        frame = self._depth_loader(frame_id)
        if (frame.width, frame.height) != (self.intrinsics.width, self.intrinsics.height):
            raise DatasetError(
                f"depth frame is {frame.width}x{frame.height}, intrinsics say "
                f"{self.intrinsics.width}x{self.intrinsics.height}",
                self._depth_location(frame_id),
            )
        return frame

    def pose(self, frame_id: int) -> Pose6D | None:
        """Pose of a frame, or None if the frame has no pose record."""
        record = self._poses_by_frame.get(frame_id)
        return record.pose if record is not None else None

    def synchronize(self) -> FrameSync:
        """Join poses, detections, and depth frames on frame_id.

        Frames need both a pose and a depth frame to be usable. Depth frames
        without a pose are skipped, pose records without depth are counted
        as missing depth, and detections on unusable frames are dropped.
        Nothing here raises; problems surface through the counters.

        Returns:
            FrameSync with usable frames in increasing frame_id order.
        """
        pose_ids = {r.frame_id for r in self.poses}
        skipped = len(self._depth_frame_ids - pose_ids)
        missing_depth = len(pose_ids - self._depth_frame_ids)

        by_frame: dict[int, list[BBox2D]] = {}
        for record in self.detections:
            by_frame.setdefault(record.frame_id, []).append(record.bbox)

        frames: list[SyncedFrame] = []
        for record in sorted(self.poses, key=lambda r: r.frame_id):
            if record.frame_id not in self._depth_frame_ids:
                continue
            frames.append(
                SyncedFrame(
                    frame_id=record.frame_id,
                    pose=record.pose,
                    detections=by_frame.get(record.frame_id, []),
                    timestamp=record.timestamp,
                )
            )

        usable = {f.frame_id for f in frames}
        dropped = sum(len(boxes) for fid, boxes in by_frame.items() if fid not in usable)

        if skipped or missing_depth or dropped:
            logger.warning(
                "synchronize: %d frames skipped (no pose), %d poses without depth, "
                "%d detections dropped",
                skipped,
                missing_depth,
                dropped,
                extra={
                    "event_type": "frame_sync",
                    "skipped_frames": skipped,
                    "missing_depth": missing_depth,
                    "dropped_detections": dropped,
                },
            )

        return FrameSync(
            frames=frames,
            skipped_frames=skipped,
            missing_depth=missing_depth,
            dropped_detections=dropped,
        )

    def frames(self) -> Iterator[tuple[int, Pose6D, list[BBox2D], DepthFrame]]:
        """Iterate synchronized frames with their depth frames, in frame order."""
        for frame in self.synchronize().frames:
            yield frame.frame_id, frame.pose, frame.detections, self.depth(frame.frame_id)

    def _depth_location(self, frame_id: int) -> str:
        if self.root is None:
            return f"<memory>/{depth_file_name(frame_id)}"
        return str(self.root / self.manifest.depth_dir / depth_file_name(frame_id))


def frames(dataset: Dataset) -> Iterator[tuple[int, Pose6D, list[BBox2D], DepthFrame]]:
    """Iterate a dataset's synchronized frames. See ``Dataset.frames``."""
    return dataset.frames()


# --- depth frames -----------------------------------------------------------


def encode_depth_pgm(frame: DepthFrame) -> bytes:
    """Encode a depth frame as binary 16-bit PGM."""
    header = f"P5\n{frame.width} {frame.height}\n{PGM_MAXVAL}\n".encode("ascii")
    return header + frame.values.astype(">u2").tobytes()


def decode_depth_pgm(data: bytes, frame_id: int, source: Path | str) -> DepthFrame:
    """Decode a binary 16-bit PGM into a depth frame.

    Args:
        data: File contents.
        frame_id: Frame id to attach.
        source: Path used in error messages.

    Returns:
        Decoded depth frame.

    Raises:
        DatasetError: On a bad magic number, a maxval other than 65535, or a
            truncated payload.
    """
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise DatasetError("truncated PGM header", source)
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the payload
    pos += 1

    if tokens[0] != b"P5":
        raise DatasetError(f"not a binary PGM (magic {tokens[0]!r})", source)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as e:
        raise DatasetError("malformed PGM header", source, original_exception=e) from e
    if maxval != PGM_MAXVAL:
        raise DatasetError(f"PGM maxval must be {PGM_MAXVAL}, got {maxval}", source)
    if width <= 0 or height <= 0:
        raise DatasetError(f"invalid PGM size {width}x{height}", source)

    expected = width * height * 2
    payload = data[pos : pos + expected]
    if len(payload) < expected:
        raise DatasetError(
            f"truncated PGM payload: {len(payload)} of {expected} bytes", source
        )
    values = np.frombuffer(payload, dtype=">u2").astype(np.uint16).reshape(height, width)
    return DepthFrame(frame_id=frame_id, width=width, height=height, values=values)


def write_depth_pgm(frame: DepthFrame, path: Path | str) -> Path:
    """Write a depth frame as a 16-bit PGM file (atomic)."""
    return write_bytes_atomic(path, encode_depth_pgm(frame))


def read_depth_pgm(path: Path | str, frame_id: int | None = None) -> DepthFrame:
    """Read a 16-bit PGM depth frame.

    Args:
        path: PGM file.
        frame_id: Frame id to attach; defaults to the numeric file stem.

    Returns:
        Decoded depth frame.

    Raises:
        DatasetError: If the file cannot be read or decoded.
    """
    pgm_path = Path(path)
    try:
        data = pgm_path.read_bytes()
    except OSError as e:
        raise DatasetError("cannot read depth frame", pgm_path, original_exception=e) from e
    if frame_id is None:
        frame_id = int(pgm_path.stem) if pgm_path.stem.isdigit() else 0
    return decode_depth_pgm(data, frame_id, pgm_path)


# --- records ----------------------------------------------------------------


def _read_json(path: Path, model: type[ModelT]) -> ModelT:
    if not path.is_file():
        raise DatasetError("file not found", path)
    try:
        return model.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DatasetError("cannot read file", path, original_exception=e) from e
    except ValidationError as e:
        raise DatasetError(f"invalid {model.__name__}: {e}", path) from e


def _read_jsonl_numbered(path: Path, model: type[ModelT]) -> list[tuple[int, ModelT]]:
    if not path.is_file():
        raise DatasetError("file not found", path)
    records: list[tuple[int, ModelT]] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise DatasetError("cannot read file", path, original_exception=e) from e
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append((lineno, model.model_validate_json(line)))
        except ValidationError as e:
            raise DatasetError(f"invalid {model.__name__}: {e}", path, line=lineno) from e
    return records


def _read_jsonl(path: Path, model: type[ModelT]) -> list[ModelT]:
    return [record for _, record in _read_jsonl_numbered(path, model)]


def _scan_depth_dir(depth_dir: Path) -> list[int]:
    ids = []
    for entry in depth_dir.iterdir():
        match = DEPTH_FILE_PATTERN.match(entry.name)
        if match and entry.is_file():
            ids.append(int(match.group(1)))
    return sorted(ids)


def load_dataset(root: Path | str) -> Dataset:
    """Load a dataset directory.

    Records are parsed and validated eagerly; depth frames are read when
    requested.

    Args:
        root: Dataset root containing manifest.json.

    Returns:
        Loaded dataset.

    Raises:
        DatasetError: On a missing file, malformed record, or invariant
            violation, naming the file and line.
    """
    root_path = Path(root)
    manifest = _read_json(root_path / MANIFEST_NAME, DatasetManifest)

    depth_dir = root_path / manifest.depth_dir
    if not depth_dir.is_dir():
        raise DatasetError("depth directory not found", depth_dir)

    intrinsics = _read_json(root_path / manifest.intrinsics, CameraIntrinsics)

    poses_path = root_path / manifest.poses
    numbered = _read_jsonl_numbered(poses_path, PoseRecord)
    for (_, prev), (lineno, record) in itertools.pairwise(numbered):
        if record.frame_id <= prev.frame_id:
            raise DatasetError(
                f"frame_id {record.frame_id} not greater than previous {prev.frame_id}",
                poses_path,
                line=lineno,
            )
    poses = [record for _, record in numbered]

    detections_path = root_path / manifest.detections
    detections: list[DetectionRecord] = []
    for lineno, record in _read_jsonl_numbered(detections_path, DetectionRecord):
        if not record.bbox.intersects_image(intrinsics.width, intrinsics.height):
            raise DatasetError(
                f"bbox centered at ({record.bbox.u}, {record.bbox.v}) lies outside the "
                f"{intrinsics.width}x{intrinsics.height} image",
                detections_path,
                line=lineno,
            )
        detections.append(record)

    ground_truth = None
    if manifest.ground_truth is not None:
        ground_truth = read_ground_truth(root_path / manifest.ground_truth)

    depth_ids = _scan_depth_dir(depth_dir)

    logger.info(
        "load_dataset: %s: %d poses, %d detections, %d depth frames%s",
        root_path,
        len(poses),
        len(detections),
        len(depth_ids),
        ", with ground truth" if ground_truth is not None else "",
    )

    def load_depth(frame_id: int) -> DepthFrame:
        return read_depth_pgm(depth_dir / depth_file_name(frame_id), frame_id)

    return Dataset(
        manifest=manifest,
        intrinsics=intrinsics,
        poses=poses,
        detections=detections,
        depth_frame_ids=depth_ids,
        depth_loader=load_depth,
        ground_truth=ground_truth,
        root=root_path,
    )


def write_dataset(dataset: Dataset, root: Path | str) -> Path:
    """Write a dataset in the directory layout ``load_dataset`` reads.

    Depth frames are materialized one at a time through the dataset's
    loader. Every file is written atomically.

    Args:
        dataset: Dataset to write.
        root: Destination directory.

    Returns:
        The destination directory.
    """
    root_path = Path(root)
    manifest = dataset.manifest
    if dataset.ground_truth is not None and manifest.ground_truth is None:
        manifest = manifest.model_copy(update={"ground_truth": "ground_truth.json"})

    write_json_atomic(root_path / manifest.intrinsics, dataset.intrinsics)
    write_jsonl_atomic(root_path / manifest.poses, dataset.poses)
    write_jsonl_atomic(root_path / manifest.detections, dataset.detections)
    depth_dir = root_path / manifest.depth_dir
    depth_dir.mkdir(parents=True, exist_ok=True)
    for frame_id in sorted(dataset.depth_frame_ids):
        write_depth_pgm(dataset.depth(frame_id), depth_dir / depth_file_name(frame_id))
    if dataset.ground_truth is not None and manifest.ground_truth is not None:
        write_json_atomic(root_path / manifest.ground_truth, dataset.ground_truth)
    # manifest last: a directory with a manifest is complete
    write_json_atomic(root_path / MANIFEST_NAME, manifest)

    logger.info(
        "write_dataset: %s: %d poses, %d detections, %d depth frames",
        root_path,
        len(dataset.poses),
        len(dataset.detections),
        len(dataset.depth_frame_ids),
    )
    return root_path


# --- pipeline outputs -------------------------------------------------------


def write_tracks(tracks: Iterable[Track], path: Path | str) -> Path:
    """Write tracks as tracks.jsonl, one track per line."""
    return write_jsonl_atomic(path, tracks)


def read_tracks(path: Path | str) -> list[Track]:
    """Read a tracks.jsonl file.

    Raises:
        DatasetError: On a missing file or malformed line.
    """
    return _read_jsonl(Path(path), Track)


def read_ground_truth(path: Path | str) -> GroundTruth:
    """Read a ground_truth.json file.

    Raises:
        DatasetError: On a missing or malformed file.
    """
    return _read_json(Path(path), GroundTruth)
