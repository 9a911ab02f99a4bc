"""Evaluation data models.

Ground-truth matching results, yield metrics, the sampled-frame
reprojection report, and overlay annotation records.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, computed_field, model_validator


class EvaluationConfig(BaseModel):
    """Evaluation and overlay parameters.

    Attributes:
        match_radius: One-to-one matching cut-off (meters).
        duplicate_radius: An unmatched track whose nearest matched fruit lies
            within this distance counts as a duplicate (meters).
        sample_interval: Seconds between sampled frames.
        sample_start: Time of the first sampled frame (seconds).
        sample_count: Number of sampled frames; None samples the whole run.
        sample_class: Class counted in the frame-sample report; None counts all.
        positive_max_px: If set, a reprojected track only counts as positive when
            a visible fruit projects within this many pixels.
        overlay_raster: Also write a PNG per frame when exporting overlays.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    match_radius: float = Field(default=0.02, gt=0)
    duplicate_radius: float = Field(default=0.2, gt=0)
    sample_interval: float = Field(default=1.0, gt=0)
    sample_start: float = Field(default=0.0, ge=0)
    sample_count: int | None = Field(default=None, ge=1)
    sample_class: int | None = Field(default=None, ge=0)
    positive_max_px: float | None = Field(default=None, gt=0)
    overlay_raster: bool = False


class MatchPair(BaseModel):
    """A matched track and ground-truth fruit."""

    model_config = {"frozen": True, "extra": "forbid"}

    track_id: int
    fruit_id: int
    error: float = Field(..., ge=0, description="Center distance (m)")


class MatchResult(BaseModel):
    """One-to-one matching between reliable tracks and ground-truth fruit.

    Attributes:
        pairs: Matched pairs, in the order they were accepted.
        unmatched_tracks: Track ids without a fruit, ascending.
        unmatched_fruits: Fruit ids without a track, ascending.
        duplicate_tracks: Unmatched track ids attributed to an already matched fruit.
        radius: Matching cut-off (meters).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    pairs: list[MatchPair] = Field(default_factory=list)
    unmatched_tracks: list[int] = Field(default_factory=list)
    unmatched_fruits: list[int] = Field(default_factory=list)
    duplicate_tracks: list[int] = Field(default_factory=list)
    radius: float = Field(default=0.02, gt=0)

    @model_validator(mode="after")
    def validate_pairs(self) -> MatchResult:
        """Ensure the pairing is one-to-one and within the radius."""
        track_ids = [p.track_id for p in self.pairs]
        fruit_ids = [p.fruit_id for p in self.pairs]
        if len(set(track_ids)) != len(track_ids) or len(set(fruit_ids)) != len(fruit_ids):
            raise ValueError("matching must be one-to-one")
        if any(p.error > self.radius for p in self.pairs):
            raise ValueError("matched pair exceeds match radius")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def duplicate_count(self) -> int:
        """Number of duplicate tracks."""
        return len(self.duplicate_tracks)


class Metrics(BaseModel):
    """Yield and tracking quality against ground truth.

    Ratio fields are percentages and are None when the ground truth gives
    nothing to divide by.

    Attributes:
        estimated_count: Tracks kept by the yield filters.
        true_count: Ground-truth fruit of the evaluated class.
        counting_accuracy: 100 - count error.
        count_error: |estimated - true| / true, in percent.
        estimated_avg_weight: Mean estimated weight (g).
        true_avg_weight: Mean ground-truth weight (g).
        avg_weight_error: Relative average-weight error, in percent.
        weight_accuracy: 100 - average-weight error.
        total_weight_error: Relative total-weight error, in percent.
        precision: Matched reliable tracks / reliable tracks, in percent.
        recall: Matched fruit / all fruit, in percent.
        duplicate_tracks: Tracks attributed to an already tracked fruit.
        flight_time: Duration of the recording (seconds).
    """

    model_config = {"frozen": True, "extra": "forbid"}

    estimated_count: int = Field(..., ge=0)
    true_count: int = Field(..., ge=0)
    counting_accuracy: float | None = None
    count_error: float | None = None
    estimated_avg_weight: float | None = None
    true_avg_weight: float | None = None
    avg_weight_error: float | None = None
    weight_accuracy: float | None = None
    total_weight_error: float | None = None
    precision: float | None = None
    recall: float | None = None
    duplicate_tracks: int = Field(default=0, ge=0)
    flight_time: float | None = None

    def summary_lines(self) -> list[str]:
        """Render the metrics as printable lines, percentages to one decimal."""

        def pct(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.1f}%"

        def grams(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.2f} g"

        return [
            f"estimated count:   {self.estimated_count} (true {self.true_count})",
            f"count error:       {pct(self.count_error)}",
            f"counting accuracy: {pct(self.counting_accuracy)}",
            f"avg weight:        {grams(self.estimated_avg_weight)} "
            f"(true {grams(self.true_avg_weight)})",
            f"avg weight error:  {pct(self.avg_weight_error)}",
            f"weight accuracy:   {pct(self.weight_accuracy)}",
            f"total weight err:  {pct(self.total_weight_error)}",
            f"precision:         {pct(self.precision)}",
            f"recall:            {pct(self.recall)}",
            f"duplicate tracks:  {self.duplicate_tracks}",
        ]


class FrameSampleRow(BaseModel):
    """Counts for one sampled frame."""

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int = Field(..., ge=0)
    timestamp: float
    visible_fruits: int = Field(..., ge=0)
    positive_tracks: int = Field(..., ge=0)


class FrameSampleReport(BaseModel):
    """Ground-truth fruit and reprojected tracks in the left half of sampled frames.

    Attributes:
        rows: One row per sampled frame.
        total_visible: Sum of visible_fruits over rows.
        total_positive: Sum of positive_tracks over rows.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    rows: list[FrameSampleRow] = Field(default_factory=list)
    total_visible: int = Field(default=0, ge=0)
    total_positive: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def validate_totals(self) -> FrameSampleReport:
        """Ensure totals are the sums of the rows."""
        if self.total_visible != sum(r.visible_fruits for r in self.rows):
            raise ValueError("total_visible must equal the sum of rows")
        if self.total_positive != sum(r.positive_tracks for r in self.rows):
            raise ValueError("total_positive must equal the sum of rows")
        return self

    @classmethod
    def from_rows(cls, rows: list[FrameSampleRow]) -> FrameSampleReport:
        """Build a report, computing totals from the rows."""
        return cls(
            rows=rows,
            total_visible=sum(r.visible_fruits for r in rows),
            total_positive=sum(r.positive_tracks for r in rows),
        )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ratio(self) -> float | None:
        """Positive tracks as a percentage of visible fruit."""
        if self.total_visible == 0:
            return None
        return 100.0 * self.total_positive / self.total_visible


class OverlayRecord(BaseModel):
    """Projected rectangle of one track in one frame."""

    model_config = {"frozen": True, "extra": "forbid"}

    frame_id: int = Field(..., ge=0)
    track_id: int = Field(..., ge=0)
    class_id: int = Field(..., ge=0)
    u_min: float
    v_min: float
    u_max: float
    v_max: float
    depth: float = Field(..., gt=0, description="Camera-frame depth of the track center (m)")
