"""Stationary-fruit tracker.

Detections are associated with the nearest existing track whose center
lies within ``dist_max``; otherwise they start a new track. Association
runs against the track centers as they were at the start of the frame,
then the matched tracks are updated in ascending detection order:

    center := (1 - w_p) * center + w_p * detection_center
    extent := (1 - w_v) * extent + w_v * detection_extent   (w, h, l separately)

``_blend`` computes the same convex combination as ``c + w * (d - c)``, which
leaves a track exactly in place when the detection coincides with it.
Nearest-track ties go to the lowest track id, whatever order the tracks are
stored in.

Tracks are never pruned: an unmatched track simply keeps its state.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy.spatial.distance import cdist

from fruit_census.exceptions import ContractViolationError
from fruit_census.models.geometry import Cube, CubeFrame
from fruit_census.models.track import FrameReport, Track, TrackerConfig

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from fruit_census.models.detection import Detection3D, FrameDetections

logger = logging.getLogger(__name__)


def _blend(current: float, observed: float, weight: float) -> float:
    return current + weight * (observed - current)


class TrackStore:
    """Single-writer store of tracks built from a detection stream.

    Usage:
        store = TrackStore(TrackerConfig())
        for frame in frames:
            store.process_frame(frame.detections)
        reliable = store.reliable_tracks()

    Attributes:
        config: Association and update parameters.
        frames_processed: Number of process_frame calls.
        detections_processed: Total detections consumed.
    """

    def __init__(self, config: TrackerConfig | None = None) -> None:
        """Initialize an empty store.

        Args:
            config: Tracker parameters. Defaults to TrackerConfig().
        """
        self.config = config or TrackerConfig()
        self.frames_processed = 0
        self.detections_processed = 0
        self._tracks: list[Track] = []
        self._next_id = 0

    @property
    def tracks(self) -> list[Track]:
        """All tracks in id order (live objects; do not mutate)."""
        return list(self._tracks)

    @property
    def next_id(self) -> int:
        """Id the next new track will receive."""
        return self._next_id

    def snapshot(self) -> list[Track]:
        """Deep copies of all tracks, safe to hand to concurrent readers."""
        return [t.model_copy(deep=True) for t in self._tracks]

    def process_frame(
        self,
        detections: Sequence[Detection3D],
        frame_id: int | None = None,
    ) -> FrameReport:
        """Associate one frame of detections and update tracks.

        Args:
            detections: World-frame detections, all from the same frame.
            frame_id: Frame being processed, if known. Must agree with the
                detections' frame ids.

        Returns:
            FrameReport listing matched pairs and new track ids.

        Raises:
            ContractViolationError: If detections come from different frames,
                or disagree with frame_id.
        """
        frame_ids = {d.frame_id for d in detections}
        if frame_id is not None:
            frame_ids.add(frame_id)
        if len(frame_ids) > 1:
            raise ContractViolationError(
                f"process_frame got detections from frames {sorted(frame_ids)}"
            )
        current_frame = next(iter(frame_ids)) if frame_ids else None

        self.frames_processed += 1
        if not detections:
            return FrameReport(frame_id=current_frame)
        assert current_frame is not None

        assignment = self._associate(detections)

        matched: list[tuple[int, int]] = []
        new_track_ids: list[int] = []
        for index, (detection, track_index) in enumerate(zip(detections, assignment, strict=True)):
            if track_index is None:
                new_track_ids.append(self._create_track(detection))
            else:
                track = self._tracks[track_index]
                self._update_track(track, detection)
                matched.append((index, track.id))

        self.detections_processed += len(detections)
        logger.debug(
            "process_frame: frame %d: %d detections, %d matched, %d new, %d tracks",
            current_frame,
            len(detections),
            len(matched),
            len(new_track_ids),
            len(self._tracks),
        )
        return FrameReport(frame_id=current_frame, matched=matched, new_track_ids=new_track_ids)

    def reliable_tracks(self) -> list[Track]:
        """Tracks with at least ``min_associations`` associations, in id order."""
        return [t for t in self._tracks if t.n_assoc >= self.config.min_associations]

    def _associate(self, detections: Sequence[Detection3D]) -> list[int | None]:
        """Nearest snapshot track within the gate per detection; ties go to the lowest id."""
        if not self._tracks:
            return [None] * len(detections)
        snapshot = np.array([t.cube.center for t in self._tracks])
        det_centers = np.array([d.cube.center for d in detections])
        distances = cdist(det_centers, snapshot)

        assignment: list[int | None] = []
        ids = np.array([t.id for t in self._tracks])
        for row in distances:
            tied = np.flatnonzero(row == row.min())
            nearest = int(tied[np.argmin(ids[tied])])
            assignment.append(nearest if row[nearest] <= self.config.dist_max else None)
        return assignment

    def _create_track(self, detection: Detection3D) -> int:
        track_id = self._next_id
        self._next_id += 1
        self._tracks.append(
            Track(
                id=track_id,
                cube=detection.cube,
                class_histogram={detection.class_id: 1},
                last_class_id=detection.class_id,
                n_assoc=1,
                created_frame=detection.frame_id,
                last_matched_frame=detection.frame_id,
            )
        )
        return track_id

    def _update_track(self, track: Track, detection: Detection3D) -> None:
        c, d = track.cube, detection.cube
        w_p, w_v = self.config.w_p, self.config.w_v
        track.cube = Cube(
            x=_blend(c.x, d.x, w_p),
            y=_blend(c.y, d.y, w_p),
            z=_blend(c.z, d.z, w_p),
            w=_blend(c.w, d.w, w_v),
            h=_blend(c.h, d.h, w_v),
            l=_blend(c.l, d.l, w_v),
            frame=CubeFrame.WORLD,
        )
        track.n_assoc += 1
        track.class_histogram[detection.class_id] = (
            track.class_histogram.get(detection.class_id, 0) + 1
        )
        track.last_class_id = detection.class_id
        track.last_matched_frame = detection.frame_id


def track_class(track: Track) -> int:
    """Aggregated class of a track: majority vote, ties to the latest class."""
    return track.class_id


def run_tracker(
    frame_detections: Iterable[FrameDetections],
    config: TrackerConfig | None = None,
) -> TrackStore:
    """Feed per-frame detections to a fresh store in frame order.

    Args:
        frame_detections: Detections per frame, in any order.
        config: Tracker parameters.

    Returns:
        The populated store.
    """
    store = TrackStore(config)
    for frame in sorted(frame_detections, key=lambda f: f.frame_id):
        store.process_frame(frame.detections, frame_id=frame.frame_id)
    return store
